from concord.modules.cluster.schemas import KMeansConfig, Clustering, ClusterSummary
from concord.modules.cluster.service import (
    kmeans_1d, exposure_edges, assign_bins, cluster_summaries, centroid_mass, clustered_concordance,
)

__all__ = [
    "KMeansConfig", "Clustering", "ClusterSummary",
    "kmeans_1d", "exposure_edges", "assign_bins", "cluster_summaries", "centroid_mass",
    "clustered_concordance",
]
