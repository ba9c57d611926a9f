"""
Командная строка concord.

Подкоманды: freq, freq-curve, sev, sev-curve, bench, synth.
Отчет пишется в stdout или в --out-file, диагностика - в stderr.
Коды завершения: 0 - успех, 1 - ошибка использования, 2 - ошибка данных или оценивания.
"""
import argparse
import json
import sys
import uuid
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from concord import __version__
from concord.config import settings
from concord.core.exceptions import ConcordError
from concord.core.logging import ContextLogger, configure_from_settings, get_logger
from concord.modules.cluster.schemas import KMeansConfig
from concord.modules.dataset.schemas import Dataset, DatasetKind, SyntheticScenario
from concord.modules.dataset.service import describe_dataset, generate_synthetic, ingest_csv, write_csv
from concord.modules.engine.schemas import ClusteredEngine, Engine, ExactEngine, SampledEngine
from concord.modules.frequency.schemas import LocalCurveConfig
from concord.modules.frequency.service import (
    compare_frequency_models, frequency_summary, global_frequency_concordance, local_frequency_curve,
)
from concord.modules.pairs.schemas import FrequencyContrast
from concord.modules.sampling.schemas import SamplingConfig
from concord.modules.severity.schemas import SeverityCurveConfig
from concord.modules.severity.service import severity_concordance, severity_curve
from concord.services.benchmark_service import BenchmarkService, cells_as_rows, pivot_table
from concord.services.report_service import ReportService, RunReport, render

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

CONTRAST_CHOICES = [c.value for c in FrequencyContrast] + ["all"]
METHOD_CHOICES = ["exact", "sample", "kmeans"]


class UsageError(Exception):
    """Ошибка разбора аргументов командной строки"""


class CliParser(argparse.ArgumentParser):
    """ArgumentParser, сообщающий об ошибке исключением вместо завершения процесса"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _list_of(convert: Callable[[str], Any]) -> Callable[[str], List[Any]]:
    def parse(value: str) -> List[Any]:
        try:
            items = [convert(item.strip()) for item in value.split(",") if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"ожидается список через запятую: {value!r}")
        if not items:
            raise argparse.ArgumentTypeError("пустой список")
        return items
    return parse


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидается целое число: {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"ожидается значение не меньше 1: {number}")
    return number


def _column_map(value: str) -> Dict[str, str]:
    mapping = {}
    for item in value.split(","):
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"ожидается поле=колонка: {item!r}")
        field, column = item.split("=", 1)
        mapping[field.strip()] = column.strip()
    return mapping


def _add_common(parser: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        parser.add_argument("--input", required=True, help="CSV с заголовком (UTF-8)")
        parser.add_argument("--column-map", type=_column_map, default=None,
                            help="Сопоставление поле=колонка через запятую")
    parser.add_argument("--seed", type=int, default=settings.sampling.SEED, help="Зерно генератора")
    parser.add_argument("--output", choices=["json", "csv"], default="json", help="Формат отчета")
    parser.add_argument("--out-file", default=None, help="Файл отчета (по умолчанию stdout)")
    parser.add_argument("--threads", type=int, default=None, help="Число потоков (по умолчанию CONCORD_THREADS)")
    parser.add_argument("--log-level", default=None, type=str.upper,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="Уровень логирования")


def _add_sampling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--S", dest="sample_size", type=_positive_int, default=None, help="Размер выборки S")
    parser.add_argument("--alpha", type=float, default=settings.sampling.ALPHA, help="Уровень значимости ДИ")
    parser.add_argument("--target-width", type=float, default=None,
                        help="Удваивать S, пока ширина ДИ больше заданной")


def _add_cluster(parser: argparse.ArgumentParser, as_lists: bool = False) -> None:
    if as_lists:
        parser.add_argument("--k", type=_list_of(int), default=[settings.cluster.K], help="Числа кластеров")
        parser.add_argument("--bins", type=_list_of(int), default=[settings.cluster.EXPOSURE_BINS],
                            help="Числа корзин экспозиции")
        parser.add_argument("--reruns", type=_list_of(int), default=[settings.cluster.RERUNS],
                            help="Перезапуски: одно значение или по значению на каждое k")
    else:
        parser.add_argument("--k", type=int, default=settings.cluster.K, help="Число кластеров")
        parser.add_argument("--bins", type=int, default=settings.cluster.EXPOSURE_BINS,
                            help="Число корзин экспозиции")
        parser.add_argument("--reruns", type=int, default=settings.cluster.RERUNS, help="Перезапуски Lloyd")
    parser.add_argument("--algorithm", choices=["lloyd", "exact"], default=settings.cluster.ALGORITHM)
    parser.add_argument("--bin-mode", choices=["quantile", "width"], default=settings.cluster.BIN_MODE)
    parser.add_argument("--tie-mode", choices=["strict", "half", "exclude"], default=settings.cluster.TIE_MODE)


def _add_frequency(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--contrast", choices=CONTRAST_CHOICES, default=FrequencyContrast.ZERO_VS_ONE_PLUS.value)
    parser.add_argument("--tol", type=float, default=settings.EXPOSURE_TOL, help="Допуск по экспозиции")


def build_parser() -> CliParser:
    parser = CliParser(prog="concord", description="Вероятности согласованности для моделей частоты и тяжести")
    parser.add_argument("--version", action="version", version=f"concord {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    freq = commands.add_parser("freq", help="Глобальная вероятность согласованности частоты")
    _add_common(freq)
    _add_frequency(freq)
    freq.add_argument("--method", choices=METHOD_CHOICES, default="sample")
    freq.add_argument("--alt-prediction", default=None, help="Колонка прогноза альтернативной модели")
    _add_sampling(freq)
    _add_cluster(freq)
    freq.set_defaults(handler=run_freq)

    freq_curve = commands.add_parser("freq-curve", help="Локальная кривая (λ, C(λ))")
    _add_common(freq_curve)
    _add_frequency(freq_curve)
    freq_curve.add_argument("--method", choices=METHOD_CHOICES, default="exact")
    freq_curve.add_argument("--grid", type=_list_of(float), default=None, help="Сетка λ через запятую")
    freq_curve.add_argument("--window", type=float, default=settings.curve.WINDOW, help="Полуширина окна")
    freq_curve.add_argument("--min-pairs", type=int, default=settings.curve.MIN_PAIRS)
    _add_sampling(freq_curve)
    _add_cluster(freq_curve)
    freq_curve.set_defaults(handler=run_freq_curve)

    sev = commands.add_parser("sev", help="Вероятность согласованности тяжести C(v)")
    _add_common(sev)
    sev.add_argument("--method", choices=METHOD_CHOICES, default="sample")
    sev.add_argument("--v", type=float, default=0.0, help="Минимальная разность размеров убытков")
    _add_sampling(sev)
    _add_cluster(sev)
    sev.set_defaults(handler=run_sev)

    sev_curve = commands.add_parser("sev-curve", help="Кривая (v, C(v))")
    _add_common(sev_curve)
    sev_curve.add_argument("--method", choices=METHOD_CHOICES, default="sample")
    sev_curve.add_argument("--grid", type=_list_of(float), default=None, help="Сетка порогов v через запятую")
    _add_sampling(sev_curve)
    _add_cluster(sev_curve)
    sev_curve.set_defaults(handler=run_sev_curve)

    bench = commands.add_parser("bench", help="Сравнение выборочной и кластерной оценок")
    _add_common(bench)
    _add_frequency(bench)
    bench.add_argument("--methods", type=_list_of(str), default=["sample", "kmeans"])
    bench.add_argument("--layout", choices=["long", "grid"], default="long",
                       help="long - по строке на ячейку, grid - корзины x k")
    _add_sampling(bench)
    _add_cluster(bench, as_lists=True)
    bench.set_defaults(handler=run_bench)

    synth = commands.add_parser("synth", help="Синтетический набор данных")
    _add_common(synth, needs_input=False)
    synth.add_argument("--n", type=int, required=True, help="Число записей")
    synth.add_argument("--scenario", choices=[s.value for s in SyntheticScenario],
                       default=SyntheticScenario.POISSON_WORLD.value)
    synth.add_argument("--dataset-out", required=True, help="Путь CSV для набора")
    synth.set_defaults(handler=run_synth)

    return parser


def _sampling_config(args: argparse.Namespace, kind: DatasetKind) -> SamplingConfig:
    default_size = settings.sampling.FREQUENCY_SIZE if kind is DatasetKind.FREQUENCY else settings.sampling.SEVERITY_SIZE
    return SamplingConfig(
        sample_size=default_size if args.sample_size is None else args.sample_size,
        seed=args.seed,
        alpha=args.alpha,
    )


def _kmeans_config(args: argparse.Namespace) -> KMeansConfig:
    return KMeansConfig(
        k=args.k,
        exposure_bins=args.bins,
        reruns=args.reruns,
        seed=args.seed,
        algorithm=args.algorithm,
        bin_mode=args.bin_mode,
        tie_mode=args.tie_mode,
    )


def build_engine(args: argparse.Namespace, kind: DatasetKind) -> Engine:
    if args.method == "sample":
        return SampledEngine(config=_sampling_config(args, kind), target_width=args.target_width)
    if args.method == "kmeans":
        return ClusteredEngine(config=_kmeans_config(args))
    return ExactEngine()


def _parameters(args: argparse.Namespace, **resolved) -> Dict[str, Any]:
    params = {key: value for key, value in vars(args).items() if key not in ("handler", "out_file", "log_level")}
    params.update(resolved)
    return params


def _load(args: argparse.Namespace, kind: DatasetKind, extra_columns: Sequence[str] = ()) -> Dataset:
    return ingest_csv(args.input, kind, args.column_map, extra_columns)


def _contrasts(value: str) -> List[FrequencyContrast]:
    if value == "all":
        return list(FrequencyContrast)
    return [FrequencyContrast(value)]


def run_freq(args: argparse.Namespace) -> RunReport:
    extra = [args.alt_prediction] if args.alt_prediction else []
    dataset = _load(args, DatasetKind.FREQUENCY, extra)
    engine = build_engine(args, DatasetKind.FREQUENCY)
    report = ReportService("freq", _parameters(args, engine=engine.model_dump(mode="json")))
    report.set_dataset(dataset, describe_dataset(dataset))

    if args.alt_prediction:
        for contrast in _contrasts(args.contrast):
            comparison = compare_frequency_models(
                dataset.frame, dataset.extras[args.alt_prediction], contrast, args.tol, engine, args.threads,
            )
            report.add_estimate(f"{contrast.value}:baseline", comparison.baseline)
            report.add_estimate(f"{contrast.value}:alternative", comparison.alternative)
            report.add_derived(f"{contrast.value}:difference", comparison.difference)
    elif args.contrast == "all":
        for row in frequency_summary(dataset.frame, args.tol, engine, workers=args.threads):
            if row.estimate is not None:
                report.add_estimate(row.contrast.value, row.estimate)
            else:
                report.add_marker(row.contrast.value, row.status, row.message)
    else:
        result = global_frequency_concordance(dataset.frame, args.contrast, args.tol, engine, args.threads)
        report.add_estimate(args.contrast, result)
    return report.finish()


def run_freq_curve(args: argparse.Namespace) -> RunReport:
    dataset = _load(args, DatasetKind.FREQUENCY)
    engine = build_engine(args, DatasetKind.FREQUENCY)
    config = LocalCurveConfig(window=args.window, min_pairs=args.min_pairs,
                              **({"lambda_grid": tuple(args.grid)} if args.grid else {}))
    report = ReportService("freq-curve", _parameters(
        args, engine=engine.model_dump(mode="json"), curve=config.model_dump(mode="json"),
    ))
    report.set_dataset(dataset, describe_dataset(dataset))
    for contrast in _contrasts(args.contrast):
        report.add_curve(contrast.value, local_frequency_curve(dataset.frame, contrast, config, engine, args.threads))
    return report.finish()


def run_sev(args: argparse.Namespace) -> RunReport:
    dataset = _load(args, DatasetKind.SEVERITY)
    engine = build_engine(args, DatasetKind.SEVERITY)
    report = ReportService("sev", _parameters(args, engine=engine.model_dump(mode="json")))
    report.set_dataset(dataset, describe_dataset(dataset))
    report.add_estimate(f"v={args.v:g}", severity_concordance(dataset.frame, args.v, engine, args.threads))
    return report.finish()


def run_sev_curve(args: argparse.Namespace) -> RunReport:
    dataset = _load(args, DatasetKind.SEVERITY)
    engine = build_engine(args, DatasetKind.SEVERITY)
    config = SeverityCurveConfig(v_grid=tuple(args.grid) if args.grid else None, engine=engine)
    points = severity_curve(dataset.frame, config, args.threads)
    report = ReportService("sev-curve", _parameters(
        args, engine=engine.model_dump(mode="json"), grid=[p.x for p in points],
    ))
    report.set_dataset(dataset, describe_dataset(dataset))
    report.add_curve("severity", points)
    return report.finish()


def run_bench(args: argparse.Namespace) -> RunReport:
    if args.contrast == "all":
        raise UsageError("bench: --contrast all не поддерживается")
    dataset = _load(args, DatasetKind.FREQUENCY)
    sampling = _sampling_config(args, DatasetKind.FREQUENCY)
    cluster = KMeansConfig(seed=args.seed, algorithm=args.algorithm, bin_mode=args.bin_mode, tie_mode=args.tie_mode)
    report = ReportService("bench", _parameters(
        args, sampling=sampling.model_dump(mode="json"), cluster=cluster.model_dump(mode="json"),
    ))
    report.set_dataset(dataset, describe_dataset(dataset))

    service = BenchmarkService(dataset.frame, args.contrast, args.tol, args.threads)
    cells = service.run(args.methods, args.k, args.bins, args.reruns, sampling, cluster)
    if args.layout == "grid":
        table = pivot_table(cells).reset_index()
        table.columns = [str(c) for c in table.columns]
        # to_json приводит типы numpy к типам JSON
        report.set_table(json.loads(table.to_json(orient="records")))
        for cell in cells:
            if cell.method == "sample" and cell.value is not None:
                report.add_derived("sample:value", cell.value)
                report.add_derived("sample:seconds", cell.seconds)
    else:
        report.set_table(cells_as_rows(cells))
    return report.finish()


def run_synth(args: argparse.Namespace) -> RunReport:
    dataset = generate_synthetic(args.n, args.scenario, args.seed)
    path = write_csv(dataset, args.dataset_out)
    report = ReportService("synth", _parameters(args, dataset_out=str(path)))
    report.set_dataset(dataset, describe_dataset(dataset))
    return report.finish()


def _emit(text: str, out_file: Optional[str]) -> None:
    if out_file:
        Path(out_file).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Точка входа CLI.

    Returns:
        Код завершения: 0, 1 (ошибка использования) или 2 (ошибка данных)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"{e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help и --version
        return int(e.code or 0)

    configure_from_settings(args.log_level)
    ContextLogger.set_context(run_id=uuid.uuid4().hex[:12], command=args.command)
    try:
        report = args.handler(args)
        _emit(render(report, args.output), args.out_file)
    except (UsageError, ValidationError) as e:
        print(f"concord {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConcordError as e:
        logger.error("run failed", extra={"error": e.to_dict()})
        print(f"concord {args.command}: {e.format_message()}", file=sys.stderr)
        return EXIT_DATA
    finally:
        ContextLogger.clear_context()
    return EXIT_OK
