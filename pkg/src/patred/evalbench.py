"""Perturbation suite, dataset grid, and ranking-agreement harness.

The harness grades every (metric, redundancy configuration) combination
by how well its candidate ranking matches an externally supplied ground
truth. Twelve original charts are sliced from a source series; each is
perturbed nine ways; every combination ranks the nine candidates per
chart; rankings are compared to the truth with three statistics:

* R^2 of an ordinary least-squares fit of the truth mean ranks on the
  method ranks,
* F1 for predicting which candidate ranks first, and
* average normalized mutual information between the per-chart rank
  sequences (truth means rounded to integers).

All randomness is derived from one master seed, so a sweep is exactly
reproducible; candidate charts are identical for every combination.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import TimeSeries, normalize_minmax, to_pointset
from .errors import DataFormatError, ValidationError
from .metrics import (
    POINT_METRICS,
    MetricId,
    distance,
    information_quantities,
    raster_distance,
)
from .raster import DEFAULT_BINS, rasterize
from .redundancy import (
    SWEEP_ETAS,
    SWEEP_N_VALUES,
    RedundancyConfig,
    RedundancyKind,
    apply as apply_redundancy,
)

GRID_LENGTHS = (6, 11, 16, 21)
GRID_SELECTIONS = 3
DEFAULT_NOISE_SCALE = 0.1


class PerturbationId(str, enum.Enum):
    INTERCHANGE2 = "interchange2"
    TWO_OUTLIERS = "two_outliers"
    OUTLIER_BEGIN = "outlier_begin"
    OUTLIER_MIDDLE = "outlier_middle"
    SHIFT2 = "shift2"
    UNIFORM_NOISE = "uniform_noise"
    STRAIGHT_LINE = "straight_line"
    ZIGZAG = "zigzag"
    RANDOM_NOISE = "random_noise"

    @classmethod
    def parse(cls, text: str) -> "PerturbationId":
        key = text.strip().lower()
        for p in cls:
            if p.value == key:
                return p
        raise ValidationError(
            f"unknown perturbation {text!r} "
            f"(expected one of: {', '.join(p.value for p in cls)})"
        )


PERTURBATION_ORDER = tuple(PerturbationId)

# Candidates that replace the data outright rather than modify it.
BENCHMARKS = frozenset({
    PerturbationId.STRAIGHT_LINE,
    PerturbationId.ZIGZAG,
    PerturbationId.RANDOM_NOISE,
})


def perturb(series: TimeSeries, which: PerturbationId, seed: int = 0,
            noise_scale: float = DEFAULT_NOISE_SCALE) -> TimeSeries:
    """Apply one controlled perturbation to a normalized series.

    Outliers are value replacements at mean + 3 sd of the input window,
    so the candidate keeps the original length. ``noise_scale`` damps the
    uniform noise case relative to the unit value range.
    """
    v = series.values
    if len(v) < 4:
        raise ValidationError("perturbation needs a series of at least 4 values")
    rng = np.random.Generator(np.random.PCG64(seed))
    out = v.copy()
    outlier = v.mean() + 3.0 * v.std()
    if which is PerturbationId.INTERCHANGE2:
        i, j = rng.choice(len(v), size=2, replace=False)
        out[i], out[j] = out[j], out[i]
    elif which is PerturbationId.TWO_OUTLIERS:
        i, j = rng.choice(len(v), size=2, replace=False)
        out[i] = outlier
        out[j] = outlier
    elif which is PerturbationId.OUTLIER_BEGIN:
        out[0] = outlier
    elif which is PerturbationId.OUTLIER_MIDDLE:
        out[len(v) // 2] = outlier
    elif which is PerturbationId.SHIFT2:
        out = np.roll(v, 2)
    elif which is PerturbationId.UNIFORM_NOISE:
        out = np.clip(v + noise_scale * rng.uniform(-1.0, 1.0, len(v)), 0.0, 1.0)
    elif which is PerturbationId.STRAIGHT_LINE:
        out = np.full(len(v), v.mean())
    elif which is PerturbationId.ZIGZAG:
        out = np.array([float(i % 2) for i in range(len(v))])
    elif which is PerturbationId.RANDOM_NOISE:
        out = rng.uniform(0.0, 1.0, len(v))
    else:
        raise ValidationError(f"unhandled perturbation {which}")
    return TimeSeries(out, series.labels)


@dataclass(frozen=True)
class GridDataset:
    """One original chart: a consecutive slice of the source series."""

    id: str
    start: int
    values: np.ndarray


def build_grid(source: TimeSeries, lengths=GRID_LENGTHS,
               selections: int = GRID_SELECTIONS, seed: int = 0) -> list[GridDataset]:
    """Randomly slice ``selections`` consecutive windows per length."""
    rng = np.random.Generator(np.random.PCG64(seed))
    datasets: list[GridDataset] = []
    for length in lengths:
        if length > len(source):
            raise ValidationError(
                f"grid length {length} exceeds source length {len(source)}"
            )
        for k in range(1, selections + 1):
            start = int(rng.integers(0, len(source) - length + 1))
            datasets.append(GridDataset(
                id=f"len{length:02d}_{k}",
                start=start,
                values=source.values[start : start + length].copy(),
            ))
    return datasets


def scale_1_9(distances) -> np.ndarray:
    """Affine rescale so the minimum maps to 1 and the maximum to 9;
    a degenerate range maps to all 5."""
    d = np.asarray(distances, dtype=float)
    lo, hi = d.min(), d.max()
    if hi == lo:
        return np.full(len(d), 5.0)
    return 1.0 + 8.0 * (d - lo) / (hi - lo)


def rank_candidates(distances, tiebreak_order=None) -> np.ndarray:
    """Ordinal ranks 1..k ascending by distance; ties fall back to
    ``tiebreak_order`` (candidate position by default)."""
    d = np.asarray(distances, dtype=float)
    if tiebreak_order is None:
        tiebreak_order = range(len(d))
    order = sorted(range(len(d)), key=lambda i: (d[i], tiebreak_order[i]))
    ranks = np.empty(len(d), dtype=int)
    for rank, i in enumerate(order, start=1):
        ranks[i] = rank
    return ranks




# ---------------------------------------------------------------------------
# Agreement statistics
# ---------------------------------------------------------------------------

def r_squared(method_scores, truth_values) -> float:
    """Coefficient of determination of OLS ``truth ~ a*method + b``."""
    x = np.asarray(method_scores, dtype=float)
    t = np.asarray(truth_values, dtype=float)
    if x.shape != t.shape or x.ndim != 1 or len(x) < 2:
        raise ValidationError("need two equal-length vectors of at least 2")
    sx = x - x.mean()
    st = t - t.mean()
    ss_t = float(st @ st)
    ss_x = float(sx @ sx)
    if ss_t == 0:
        return 1.0
    if ss_x == 0:
        return 0.0
    r = float(sx @ st) / np.sqrt(ss_x * ss_t)
    return float(r * r)


def f1_rank1(method_ranks, truth_ranks) -> float:
    """F1 for the binary task "is this candidate ranked first"."""
    m = np.asarray(method_ranks, dtype=int).reshape(-1)
    t = np.asarray(truth_ranks, dtype=int).reshape(-1)
    if m.shape != t.shape:
        raise ValidationError("rank vectors must have the same length")
    pred = m == 1
    actual = t == 1
    tp = int(np.count_nonzero(pred & actual))
    fp = int(np.count_nonzero(pred & ~actual))
    fn = int(np.count_nonzero(~pred & actual))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _single_sequence_nmi(m: np.ndarray, t: np.ndarray) -> float:
    _, mi = np.unique(m, return_inverse=True)
    _, ti = np.unique(t, return_inverse=True)
    table = np.zeros((mi.max() + 1, ti.max() + 1))
    np.add.at(table, (mi, ti), 1.0)
    q = information_quantities(table)
    if q.hx <= 0 or q.hy <= 0:
        # Zero-entropy guard: identical constants are fully similar,
        # any other degenerate pairing carries no information.
        return 1.0 if np.array_equal(m, t) else 0.0
    return float(min(max(q.mi / np.sqrt(q.hx * q.hy), 0.0), 1.0))


def sequence_nmi(method_ranks, truth_ranks) -> float:
    """Average NMI between per-chart discrete rank sequences.

    Accepts a single pair of rank sequences (1D) or one sequence per
    chart (2D), averaging over charts.
    """
    m = np.asarray(method_ranks, dtype=int)
    t = np.asarray(truth_ranks, dtype=int)
    if m.shape != t.shape:
        raise ValidationError("rank arrays must have the same shape")
    if m.ndim == 1:
        return _single_sequence_nmi(m, t)
    if m.ndim != 2:
        raise ValidationError("rank arrays must be 1- or 2-dimensional")
    return float(np.mean([
        _single_sequence_nmi(m[i], t[i]) for i in range(m.shape[0])
    ]))


# ---------------------------------------------------------------------------
# Ground truth files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroundTruth:
    """Mean similarity rank per (dataset, perturbation), 1 = most similar."""

    entries: dict[tuple[str, str], float]

    def mean_rank(self, dataset_id: str, perturbation: PerturbationId) -> float:
        key = (dataset_id, perturbation.value)
        if key not in self.entries:
            raise ValidationError(f"ground truth missing entry for {key}")
        return self.entries[key]

    def ordinal_ranks(self, dataset_id: str) -> np.ndarray:
        means = [self.mean_rank(dataset_id, p) for p in PERTURBATION_ORDER]
        return rank_candidates(means)

    def rounded_ranks(self, dataset_id: str) -> np.ndarray:
        means = [self.mean_rank(dataset_id, p) for p in PERTURBATION_ORDER]
        return np.asarray(np.rint(means), dtype=int)


def load_truth_csv(path: str | Path) -> GroundTruth:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"no such file: {path}")
    entries: dict[tuple[str, str], float] = {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"dataset_id", "perturbation_id", "mean_rank"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise DataFormatError(
                f"{path}: ground truth needs columns dataset_id, "
                f"perturbation_id, mean_rank"
            )
        for i, row in enumerate(reader, start=2):
            perturbation = PerturbationId.parse(row["perturbation_id"])
            try:
                rank = float(row["mean_rank"])
            except ValueError:
                raise DataFormatError(
                    f"{path}: non-numeric mean_rank at row {i}"
                ) from None
            entries[(row["dataset_id"], perturbation.value)] = rank
    return GroundTruth(entries)


def save_truth_csv(truth: GroundTruth, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dataset_id", "perturbation_id", "mean_rank"])
        for (dataset_id, perturbation), rank in sorted(truth.entries.items()):
            writer.writerow([dataset_id, perturbation, repr(float(rank))])


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepOptions:
    b: int = DEFAULT_BINS
    metrics: tuple[MetricId, ...] = tuple(MetricId)
    kinds: tuple[RedundancyKind, ...] = (
        RedundancyKind.EQUIDISTANT, RedundancyKind.AREALINE, RedundancyKind.CLOUD,
    )
    n_values: tuple[int, ...] = SWEEP_N_VALUES
    etas: tuple[float, ...] = SWEEP_ETAS
    noise_scale: float = DEFAULT_NOISE_SCALE
    seed: int = 0


@dataclass(frozen=True)
class SweepCell:
    metric: MetricId
    config: RedundancyConfig
    dataset: str
    perturbation: PerturbationId
    distance: float
    rank: int
    score: float


@dataclass(frozen=True)
class AgreementRow:
    metric: MetricId
    config: RedundancyConfig
    r2: float | None
    f1: float | None
    seq_nmi: float | None


@dataclass
class SweepResult:
    options: SweepOptions
    datasets: list[GridDataset]
    cells: list[SweepCell]
    agreements: list[AgreementRow]

    def combo_count(self) -> int:
        return len({(c.metric, c.config) for c in self.cells})

    def ranks_for(self, metric: MetricId, config: RedundancyConfig) -> np.ndarray:
        """Per-dataset rank rows (n_datasets x 9) for one combination."""
        by_key = {(c.dataset, c.perturbation): c.rank for c in self.cells
                  if c.metric is metric and c.config == config}
        return np.array([
            [by_key[(ds.id, p)] for p in PERTURBATION_ORDER]
            for ds in self.datasets
        ])


def sweep_configs(opts: SweepOptions) -> list[RedundancyConfig]:
    """The redundancy grid: every kind crossed with the point-count sweep,
    and with the noise amplitudes for the cloud kinds."""
    configs: list[RedundancyConfig] = []
    for kind in opts.kinds:
        for n in opts.n_values:
            if kind in (RedundancyKind.CLOUD, RedundancyKind.GAUSSCLOUD):
                for eta in opts.etas:
                    configs.append(RedundancyConfig(
                        kind=kind, n_points=n, eta=eta, seed=opts.seed))
            else:
                configs.append(RedundancyConfig(kind=kind, n_points=n,
                                                seed=opts.seed))
    return configs


def is_compatible(metric: MetricId, config: RedundancyConfig) -> bool:
    if metric in POINT_METRICS:
        return config.kind in (RedundancyKind.NONE, RedundancyKind.EQUIDISTANT)
    return True


def _perturbation_seed(master: int, dataset_index: int, p_index: int) -> int:
    seq = np.random.SeedSequence([master, dataset_index, p_index])
    return int(seq.generate_state(1)[0])


def build_candidates(datasets: list[GridDataset], seed: int,
                     noise_scale: float = DEFAULT_NOISE_SCALE
                     ) -> dict[tuple[str, PerturbationId], np.ndarray]:
    """Normalized candidate values per (dataset, perturbation); identical
    for every metric/config combination."""
    candidates: dict[tuple[str, PerturbationId], np.ndarray] = {}
    for di, ds in enumerate(datasets):
        original = TimeSeries(normalize_minmax(ds.values))
        for pi, p in enumerate(PERTURBATION_ORDER):
            perturbed = perturb(original, p, _perturbation_seed(seed, di, pi),
                                noise_scale)
            candidates[(ds.id, p)] = normalize_minmax(perturbed.values)
    return candidates


def run_sweep(datasets: list[GridDataset], truth: GroundTruth | None = None,
              opts: SweepOptions = SweepOptions()) -> SweepResult:
    """Evaluate the full metric x redundancy grid over the dataset grid."""
    configs = sweep_configs(opts)
    candidates = build_candidates(datasets, opts.seed, opts.noise_scale)
    originals = {ds.id: normalize_minmax(ds.values) for ds in datasets}

    group_metrics = [m for m in opts.metrics if m not in POINT_METRICS]
    point_metrics = [m for m in opts.metrics if m in POINT_METRICS]

    cells: list[SweepCell] = []
    for config in configs:
        for ds in datasets:
            img_original = rasterize(
                apply_redundancy(to_pointset(originals[ds.id]), config), opts.b)
            candidate_imgs = [
                rasterize(apply_redundancy(
                    to_pointset(candidates[(ds.id, p)]), config), opts.b)
                for p in PERTURBATION_ORDER
            ]
            for metric in group_metrics:
                dists = [raster_distance(metric, img_original, img)
                         for img in candidate_imgs]
                cells.extend(_make_cells(metric, config, ds.id, dists))
            if point_metrics and is_compatible(MetricId.PEARSON, config):
                original_ps = to_pointset(originals[ds.id])
                candidate_ps = [to_pointset(candidates[(ds.id, p)])
                                for p in PERTURBATION_ORDER]
                for metric in point_metrics:
                    dists = [
                        _point_metric_distance(metric, original_ps, ps,
                                               config, opts.b)
                        for ps in candidate_ps
                    ]
                    cells.extend(_make_cells(metric, config, ds.id, dists))

    agreements = _compute_agreements(cells, datasets, truth, opts, configs)
    return SweepResult(options=opts, datasets=datasets, cells=cells,
                       agreements=agreements)


def _point_metric_distance(metric: MetricId, x, y, config: RedundancyConfig,
                           b: int) -> float:
    try:
        return distance(x, y, metric, config, b).value
    except ValidationError:
        # Pearson against a constant candidate (the straight-line
        # benchmark) has no defined correlation; score it as no
        # association, r = 0.
        if metric is MetricId.PEARSON:
            return 0.5
        raise


def _make_cells(metric: MetricId, config: RedundancyConfig, dataset_id: str,
                dists: list[float]) -> list[SweepCell]:
    ranks = rank_candidates(dists)
    scores = scale_1_9(dists)
    return [
        SweepCell(metric=metric, config=config, dataset=dataset_id,
                  perturbation=p, distance=float(dists[i]),
                  rank=int(ranks[i]), score=float(scores[i]))
        for i, p in enumerate(PERTURBATION_ORDER)
    ]


def _compute_agreements(cells, datasets, truth, opts, configs):
    by_combo: dict[tuple[MetricId, RedundancyConfig], dict] = {}
    for c in cells:
        combo = by_combo.setdefault((c.metric, c.config), {})
        combo[(c.dataset, c.perturbation)] = c.rank

    agreements: list[AgreementRow] = []
    for metric in opts.metrics:
        for config in configs:
            key = (metric, config)
            if key not in by_combo:
                continue
            ranks = by_combo[key]
            if truth is None:
                agreements.append(AgreementRow(metric, config, None, None, None))
                continue
            method_flat, truth_means = [], []
            method_rows, truth_ordinal_rows, truth_rounded_rows = [], [], []
            for ds in datasets:
                row = [ranks[(ds.id, p)] for p in PERTURBATION_ORDER]
                method_rows.append(row)
                method_flat.extend(row)
                truth_means.extend(
                    truth.mean_rank(ds.id, p) for p in PERTURBATION_ORDER)
                truth_ordinal_rows.append(truth.ordinal_ranks(ds.id))
                truth_rounded_rows.append(truth.rounded_ranks(ds.id))
            agreements.append(AgreementRow(
                metric=metric, config=config,
                r2=r_squared(method_flat, truth_means),
                f1=f1_rank1(np.array(method_rows).reshape(-1),
                            np.array(truth_ordinal_rows).reshape(-1)),
                seq_nmi=sequence_nmi(np.array(method_rows),
                                     np.array(truth_rounded_rows)),
            ))
    return agreements


def make_synthetic_truth(result: SweepResult, metric: MetricId,
                         config: RedundancyConfig) -> GroundTruth:
    """A ground-truth file containing one combination's own ordinal ranks,
    for harness self-consistency checks."""
    entries: dict[tuple[str, str], float] = {}
    found = False
    for c in result.cells:
        if c.metric is metric and c.config == config:
            entries[(c.dataset, c.perturbation.value)] = float(c.rank)
            found = True
    if not found:
        raise ValidationError(
            f"sweep holds no cells for {metric.value} / {config.label()}")
    return GroundTruth(entries)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

_KIND_ORDER = {k: i for i, k in enumerate(RedundancyKind)}
_METRIC_ORDER = {m: i for i, m in enumerate(MetricId)}
_PERTURBATION_INDEX = {p: i for i, p in enumerate(PERTURBATION_ORDER)}


def _eta_column(config: RedundancyConfig) -> str:
    if config.kind in (RedundancyKind.CLOUD, RedundancyKind.GAUSSCLOUD):
        return repr(config.eta)
    return ""


def _cell_sort_key(result: SweepResult):
    ds_index = {ds.id: i for i, ds in enumerate(result.datasets)}

    def key(c: SweepCell):
        return (_METRIC_ORDER[c.metric], _KIND_ORDER[c.config.kind],
                c.config.n_points,
                c.config.eta if _eta_column(c.config) else -1.0,
                ds_index[c.dataset], _PERTURBATION_INDEX[c.perturbation])

    return key


def sweep_cells_csv(result: SweepResult) -> str:
    """Long-form sweep table; the agreement columns repeat per combination
    and stay empty when no ground truth was supplied."""
    by_combo = {(a.metric, a.config): a for a in result.agreements}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "kind", "eta", "n", "dataset", "perturbation",
                     "distance", "rank", "score", "r2", "f1", "seq_nmi"])
    for c in sorted(result.cells, key=_cell_sort_key(result)):
        agreement = by_combo.get((c.metric, c.config))

        def stat(value):
            return "" if value is None else repr(value)

        writer.writerow([
            c.metric.value, c.config.kind.value, _eta_column(c.config),
            c.config.n_points, c.dataset, c.perturbation.value,
            repr(c.distance), c.rank, repr(c.score),
            stat(agreement.r2 if agreement else None),
            stat(agreement.f1 if agreement else None),
            stat(agreement.seq_nmi if agreement else None),
        ])
    return buf.getvalue()


def agreement_table_csv(result: SweepResult, stat: str) -> str:
    """Wide table of one agreement statistic: a row per (metric, kind, eta)
    with a column per point count plus the row min and max."""
    if stat not in ("r2", "f1", "seq_nmi"):
        raise ValidationError(f"unknown statistic {stat!r}")
    n_values = list(result.options.n_values)
    rows: dict[tuple, dict[int, float | None]] = {}
    for a in result.agreements:
        key = (a.metric, a.config.kind,
               a.config.eta if _eta_column(a.config) else None)
        rows.setdefault(key, {})[a.config.n_points] = getattr(a, stat)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "kind", "eta"]
                    + [f"n{n}" for n in n_values] + ["min", "max"])
    for key in sorted(rows, key=lambda k: (_METRIC_ORDER[k[0]],
                                           _KIND_ORDER[k[1]], k[2] or -1.0)):
        metric, kind, eta = key
        values = [rows[key].get(n) for n in n_values]
        present = [v for v in values if v is not None]
        writer.writerow(
            [metric.value, kind.value, "" if eta is None else repr(eta)]
            + [("" if v is None else repr(v)) for v in values]
            + ([repr(min(present)), repr(max(present))] if present else ["", ""])
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Per-perturbation directional study
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MagnitudeStudyRow:
    metric: MetricId
    n_points: int
    r2: float


MAGNITUDE_MULTIPLIERS = tuple(round(0.15 * k, 3) for k in range(1, 10))


def _shuffled_rank_r2(dist_rows: list[list[float]], truth: np.ndarray,
                      rng: np.random.Generator) -> float:
    method, truth_flat = [], []
    for dists in dist_rows:
        shuffle = rng.permutation(len(dists))
        method.extend(rank_candidates(dists, tiebreak_order=shuffle))
        truth_flat.extend(truth)
    return r_squared(method, truth_flat)


def outlier_magnitude_study(
    datasets: list[GridDataset],
    metrics: tuple[MetricId, ...] = tuple(MetricId),
    n_values: tuple[int, ...] = (0, 1),
    b: int = DEFAULT_BINS,
    multipliers: tuple[float, ...] = MAGNITUDE_MULTIPLIERS,
    seed: int = 0,
    draws: int = 64,
) -> list[MagnitudeStudyRow]:
    """R^2 against a monotone truth for middle-outlier candidates of
    growing magnitude.

    Per chart, nine candidates raise the middle value by m * sd above its
    original value for increasing multipliers m, so severity grows
    monotonically for every chart and the truth ranks them 1..9 by
    magnitude. The default multipliers stay below the raster cell size,
    probing how finely each combination resolves sub-cell differences.
    R^2 is averaged over ``draws`` seeded random tie-break orders, the
    way ranking tied-looking charts presented in random order would
    resolve them; the same orders are reused for every (metric, n) cell,
    so cells are directly comparable.
    """
    truth = np.arange(1, len(multipliers) + 1)

    per_dataset: list[dict] = []
    for ds in datasets:
        original = normalize_minmax(ds.values)
        mid_index = len(original) // 2
        sd = original.std()
        variants = []
        for m in multipliers:
            candidate = original.copy()
            candidate[mid_index] = candidate[mid_index] + m * sd
            variants.append(normalize_minmax(candidate))
        per_dataset.append({"original": original, "variants": variants})

    rows: list[MagnitudeStudyRow] = []
    for metric in metrics:
        for n in n_values:
            config = RedundancyConfig(kind=RedundancyKind.EQUIDISTANT,
                                      n_points=n, seed=seed)
            dist_rows = []
            for entry in per_dataset:
                original_ps = to_pointset(entry["original"])
                dist_rows.append([
                    distance(original_ps, to_pointset(v), metric, config, b).value
                    for v in entry["variants"]
                ])
            rng = np.random.Generator(np.random.PCG64(seed))
            r2 = float(np.mean([
                _shuffled_rank_r2(dist_rows, truth, rng) for _ in range(draws)
            ]))
            rows.append(MagnitudeStudyRow(metric=metric, n_points=n, r2=r2))
    return rows


def magnitude_study_csv(rows: list[MagnitudeStudyRow]) -> str:
    """Per-perturbation layout: a row per metric, a column per point count."""
    n_values = sorted({r.n_points for r in rows})
    by_metric: dict[MetricId, dict[int, float]] = {}
    for r in rows:
        by_metric.setdefault(r.metric, {})[r.n_points] = r.r2
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric"] + [f"n{n}" for n in n_values] + ["min", "max"])
    for metric in sorted(by_metric, key=lambda m: _METRIC_ORDER[m]):
        values = [by_metric[metric][n] for n in n_values]
        writer.writerow([metric.value] + [repr(v) for v in values]
                        + [repr(min(values)), repr(max(values))])
    return buf.getvalue()
