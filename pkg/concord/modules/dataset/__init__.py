from concord.modules.dataset.schemas import (
    Dataset, DatasetKind, DatasetSource, DatasetDescription, RowRejection, SyntheticScenario,
)
from concord.modules.dataset.service import (
    ingest_csv, write_csv, generate_synthetic, describe_dataset, calibrate_poisson_world,
    expected_class_shares,
)

__all__ = [
    "Dataset", "DatasetKind", "DatasetSource", "DatasetDescription", "RowRejection", "SyntheticScenario",
    "ingest_csv", "write_csv", "generate_synthetic", "describe_dataset", "calibrate_poisson_world",
    "expected_class_shares",
]
