"""Command-line entry points.

Thin adapters over the library: compute distances, run searches, apply
perturbations, run the evaluation sweep, emit polar coordinates, and
serve the HTTP API. Every command accepts ``--seed`` and ``--out``;
outputs are byte-identical across runs with the same seed. Exit codes:
0 success, 2 validation error, 1 runtime error.

A ``--config`` JSON file may supply any flag by its name (dashes become
underscores); flags given explicitly on the command line win.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np
from click.core import ParameterSource

from .core import (
    TimeSeries,
    load_csv,
    load_pattern_csv,
    normalize_minmax,
    to_pointset,
)
from .errors import PatredError, ValidationError
from .evalbench import (
    PerturbationId,
    SweepOptions,
    agreement_table_csv,
    build_grid,
    load_truth_csv,
    magnitude_study_csv,
    outlier_magnitude_study,
    perturb,
    run_sweep,
    sweep_cells_csv,
)
from .figures import match_strip, mid_scatter, save_svg, sparkline_grid
from .metrics import MetricId, Mode, distance
from .mid import mid_point_guarded, reference_point
from .raster import DEFAULT_BINS, rasterize
from .redundancy import (
    DEFAULT_COPIES,
    DEFAULT_SHIFT,
    SWEEP_ETAS,
    SWEEP_N_VALUES,
    RedundancyConfig,
    RedundancyKind,
    apply as apply_redundancy,
)
from .search import MatchResult, SearchRequest, search


def guarded(fn):
    """Map library errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (PatredError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _merged(ctx: click.Context) -> dict:
    """Start from the bound flag values; a config file fills in any flag
    left at its default. Keys mirror the flag names one-to-one."""
    params = dict(ctx.params)
    config_path = params.pop("config", None)
    if not config_path:
        return params
    path = Path(config_path)
    if not path.exists():
        raise ValidationError(f"no such config file: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    for key, value in data.items():
        if key not in params:
            raise ValidationError(
                f"{path}: unknown config key {key!r} "
                f"(valid: {', '.join(sorted(params))})"
            )
        if ctx.get_parameter_source(key) in (ParameterSource.DEFAULT,
                                             ParameterSource.DEFAULT_MAP):
            params[key] = value
    return params


def _emit(text: str, out: str | None) -> None:
    if out:
        path = Path(out)
        if str(path.parent) not in ("", "."):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        click.echo(text, nl=False)


def _redundancy_from(params: dict) -> RedundancyConfig:
    return RedundancyConfig(
        kind=RedundancyKind.parse(params["redundancy"]),
        n_points=params["n"],
        copies=params["copies"],
        shift=params["shift"],
        eta=params["eta"],
        seed=params["seed"],
    )


def _mode_from(params: dict) -> Mode | None:
    raw = params.get("mode")
    if raw is None:
        return None
    try:
        return Mode(raw)
    except ValueError:
        raise ValidationError(
            f"unknown mode {raw!r} (expected sequence or raster)"
        ) from None


def redundancy_options(fn):
    fn = click.option("--redundancy", default="none", show_default=True,
                      help="Redundancy kind: none, equidistant, arealine, "
                           "cloud, or gausscloud.")(fn)
    fn = click.option("--n", default=0, show_default=True,
                      help="Redundant points per adjacent pair.")(fn)
    fn = click.option("--copies", default=DEFAULT_COPIES, show_default=True,
                      help="Line copies for the area-line kind.")(fn)
    fn = click.option("--shift", default=DEFAULT_SHIFT, show_default=True,
                      help="Vertical shift between area-line copies.")(fn)
    fn = click.option("--eta", default=0.1, show_default=True,
                      help="Noise amplitude for the cloud kinds.")(fn)
    return fn


def common_options(fn):
    fn = click.option("--seed", default=0, show_default=True,
                      help="Master random seed.")(fn)
    fn = click.option("--out", default=None, type=click.Path(),
                      help="Write output here instead of stdout.")(fn)
    fn = click.option("--config", default=None, type=click.Path(),
                      help="JSON file with the same keys as the flags; "
                           "explicit flags win.")(fn)
    return fn


@click.group()
@click.version_option(package_name="patred")
def main() -> None:
    """Sketch-driven pattern search in time-series line charts."""


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

@main.command("metrics")
@click.option("--pattern", required=True, type=click.Path(),
              help="Exemplar CSV (x,y columns, or one value column).")
@click.option("--candidate", required=True, type=click.Path(),
              help="Candidate window CSV.")
@click.option("--metric", default="nmi", show_default=True,
              help="Metric name, or 'all' for every metric.")
@click.option("--b", default=DEFAULT_BINS, show_default=True,
              help="Bins per image axis.")
@click.option("--mode", default=None,
              help="Force comparison mode: sequence or raster.")
@click.option("--dump-raster", is_flag=True,
              help="Include the binned count matrices in the output.")
@redundancy_options
@common_options
@click.pass_context
@guarded
def metrics_cmd(ctx, **_kwargs) -> None:
    """Distance between an exemplar and one candidate window."""
    params = _merged(ctx)
    pattern = load_pattern_csv(params["pattern"])
    series = load_csv(params["candidate"])
    candidate = normalize_minmax(series.values)
    if len(pattern) != len(candidate):
        pattern = pattern.resample(len(candidate))
    config = _redundancy_from(params)
    mode = _mode_from(params)
    pattern_ps, candidate_ps = to_pointset(pattern), to_pointset(candidate)

    if params["metric"] == "all":
        requested = list(MetricId)
    else:
        requested = [MetricId.parse(params["metric"])]

    entries = []
    for metric in requested:
        try:
            value = distance(pattern_ps, candidate_ps, metric, config,
                             params["b"], mode)
            entries.append(value.to_dict())
        except ValidationError as exc:
            if len(requested) == 1:
                raise
            entries.append({"metric": metric.value, "error": str(exc)})

    payload: dict | list = entries[0] if len(requested) == 1 else entries
    if params["dump_raster"]:
        b = params["b"]
        payload = {
            "distances": payload,
            "raster": {
                "pattern": rasterize(apply_redundancy(pattern_ps, config),
                                     b).to_lists(),
                "candidate": rasterize(apply_redundancy(candidate_ps, config),
                                       b).to_lists(),
            },
        }
    _emit(json.dumps(payload, indent=2) + "\n", params["out"])


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

@main.command("search")
@click.option("--pattern", required=True, type=click.Path())
@click.option("--data", required=True, type=click.Path())
@click.option("--value-column", default=None,
              help="Data column to read (default: last column).")
@click.option("--metric", default="nmi", show_default=True)
@click.option("--b", default=DEFAULT_BINS, show_default=True)
@click.option("--stride", default=1, show_default=True)
@click.option("--top-k", default=9, show_default=True)
@click.option("--exclusion", default=None, type=int,
              help="Minimum index gap between matches "
                   "(default: one window length).")
@click.option("--window-length", default=None, type=int,
              help="Resample the pattern to this many points.")
@click.option("--mode", default=None,
              help="Force comparison mode: sequence or raster.")
@click.option("--figures", default=None, type=click.Path(),
              help="Directory for a match-strip SVG.")
@redundancy_options
@common_options
@click.pass_context
@guarded
def search_cmd(ctx, **_kwargs) -> None:
    """Find the best-matching windows of a series."""
    params = _merged(ctx)
    request = SearchRequest(
        pattern=load_pattern_csv(params["pattern"]),
        series=load_csv(params["data"], params["value_column"]),
        metric=MetricId.parse(params["metric"]),
        redundancy=_redundancy_from(params),
        b=params["b"],
        stride=params["stride"],
        top_k=params["top_k"],
        exclusion=params["exclusion"],
        window_length=params["window_length"],
        mode=_mode_from(params),
    )
    matches = search(request)
    payload = {
        "request": request.to_dict(),
        "matches": [m.to_dict() for m in matches],
    }
    _emit(json.dumps(payload, indent=2) + "\n", params["out"])
    if params["figures"]:
        svg = match_strip(
            request.pattern.values,
            [np.asarray(m.window) for m in matches],
            [f"#{m.start_index} d={m.distance:.3f}" for m in matches],
            title="pattern and ranked matches",
        )
        save_svg(svg, Path(params["figures"]) / "matches.svg")


# ---------------------------------------------------------------------------
# perturb
# ---------------------------------------------------------------------------

@main.command("perturb")
@click.option("--data", required=True, type=click.Path())
@click.option("--value-column", default=None)
@click.option("--which", required=True,
              help="Perturbation id, e.g. shift2 or outlier_middle.")
@click.option("--noise-scale", default=0.1, show_default=True,
              help="Amplitude multiplier for uniform noise.")
@common_options
@click.pass_context
@guarded
def perturb_cmd(ctx, **_kwargs) -> None:
    """Emit one perturbed copy of a normalized series as CSV."""
    params = _merged(ctx)
    series = load_csv(params["data"], params["value_column"])
    normalized = TimeSeries(normalize_minmax(series.values), series.labels)
    result = perturb(normalized, PerturbationId.parse(params["which"]),
                     params["seed"], params["noise_scale"])
    lines = []
    if result.labels is not None:
        lines.append("label,value")
        lines.extend(f"{label},{float(value)!r}"
                     for label, value in zip(result.labels, result.values))
    else:
        lines.append("value")
        lines.extend(f"{float(value)!r}" for value in result.values)
    _emit("\n".join(lines) + "\n", params["out"])


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _parse_list(text: str | None, parse_item, label: str) -> tuple | None:
    if not text:
        return None
    try:
        return tuple(parse_item(item.strip()) for item in text.split(","))
    except (ValueError, ValidationError) as exc:
        raise ValidationError(f"bad {label} list {text!r}: {exc}") from None


@main.command("eval")
@click.option("--data", required=True, type=click.Path(),
              help="Source series sliced into the dataset grid.")
@click.option("--value-column", default=None)
@click.option("--truth", default=None, type=click.Path(),
              help="Ground-truth CSV (dataset_id, perturbation_id, "
                   "mean_rank); omitting it leaves agreement columns empty.")
@click.option("--b", default=DEFAULT_BINS, show_default=True)
@click.option("--noise-scale", default=0.1, show_default=True)
@click.option("--metrics", default=None,
              help="Comma-separated metric subset (default: all nine).")
@click.option("--kinds", default=None,
              help="Comma-separated redundancy kinds "
                   "(default: equidistant,arealine,cloud).")
@click.option("--n-values", default=None,
              help="Comma-separated point counts (default: full sweep).")
@click.option("--etas", default=None,
              help="Comma-separated cloud amplitudes (default: sweep set).")
@click.option("--study", type=click.Choice(["sweep", "magnitude"]),
              default="sweep", show_default=True,
              help="'magnitude' emits the middle-outlier severity table "
                   "instead of the full sweep.")
@click.option("--figures", default=None, type=click.Path(),
              help="Directory for trajectory SVGs (needs --truth).")
@common_options
@click.pass_context
@guarded
def eval_cmd(ctx, **_kwargs) -> None:
    """Run the ranking-agreement sweep over the dataset grid."""
    params = _merged(ctx)
    source = load_csv(params["data"], params["value_column"])
    datasets = build_grid(source, seed=params["seed"])

    metric_ids = _parse_list(params["metrics"], MetricId.parse, "metric")
    if params["study"] == "magnitude":
        rows = outlier_magnitude_study(
            datasets, metrics=metric_ids or tuple(MetricId),
            b=params["b"], seed=params["seed"])
        _emit(magnitude_study_csv(rows), params["out"])
        return

    kinds = _parse_list(params["kinds"], RedundancyKind.parse, "kind")
    n_values = _parse_list(params["n_values"], int, "n")
    etas = _parse_list(params["etas"], float, "eta")
    opts = SweepOptions(
        b=params["b"],
        metrics=metric_ids or tuple(MetricId),
        kinds=kinds or (RedundancyKind.EQUIDISTANT, RedundancyKind.AREALINE,
                        RedundancyKind.CLOUD),
        n_values=n_values or SWEEP_N_VALUES,
        etas=etas or SWEEP_ETAS,
        noise_scale=params["noise_scale"],
        seed=params["seed"],
    )
    truth = load_truth_csv(params["truth"]) if params["truth"] else None
    result = run_sweep(datasets, truth, opts)
    _emit(sweep_cells_csv(result), params["out"])

    if truth is not None and params["out"]:
        stem = Path(params["out"])
        for stat, suffix in (("r2", "_r2"), ("f1", "_f1"),
                             ("seq_nmi", "_nmi")):
            table = agreement_table_csv(result, stat)
            stem.with_name(stem.stem + suffix + ".csv").write_text(table)

    if params["figures"]:
        if truth is None:
            click.echo("note: --figures needs --truth; no figures written",
                       err=True)
            return
        _write_trajectory_figures(result, opts, Path(params["figures"]))


def _write_trajectory_figures(result, opts, figures_dir: Path) -> None:
    n_values = list(opts.n_values)
    for stat, title in (("r2", "rank agreement R^2 over redundancy"),
                        ("f1", "rank-1 F1 over redundancy"),
                        ("seq_nmi", "rank-sequence NMI over redundancy")):
        rows = {}
        for a in result.agreements:
            value = getattr(a, stat)
            if value is None:
                continue
            eta = (a.config.eta if a.config.kind.value.endswith("cloud")
                   else None)
            label = f"{a.metric.value} / {a.config.kind.value}" + (
                f" eta={eta}" if eta is not None else "")
            rows.setdefault(label, {})[a.config.n_points] = value
        sparkrows = [
            (label, [by_n[n] for n in n_values if n in by_n])
            for label, by_n in sorted(rows.items())
        ]
        svg = sparkline_grid(sparkrows, title=title,
                             x_labels=[str(n) for n in n_values])
        save_svg(svg, figures_dir / f"{stat}.svg")


# ---------------------------------------------------------------------------
# mid
# ---------------------------------------------------------------------------

@main.command("mid")
@click.option("--matches", required=True, type=click.Path(),
              help="matches.json produced by the search command.")
@click.option("--figures", default=None, type=click.Path(),
              help="Directory for the polar scatter SVG.")
@common_options
@click.pass_context
@guarded
def mid_cmd(ctx, **_kwargs) -> None:
    """Polar similarity coordinates for a stored search result."""
    params = _merged(ctx)
    path = Path(params["matches"])
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    try:
        payload = json.loads(path.read_text())
        request = SearchRequest.from_dict(payload["request"])
        matches = [MatchResult(
            start_index=m["start_index"], distance=m["distance"],
            rank=m["rank"], window=np.asarray(m["window"]),
        ) for m in payload["matches"]]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"{path}: not a matches file ({exc})") from None

    pattern = request.pattern
    window = request.resolved_window()
    if len(pattern) != window:
        pattern = pattern.resample(window)
    reference_img = rasterize(
        apply_redundancy(to_pointset(pattern), request.redundancy), request.b)
    points = [reference_point(reference_img)]
    for match in matches:
        candidate_img = rasterize(apply_redundancy(
            to_pointset(match.window), request.redundancy), request.b)
        points.append(mid_point_guarded(reference_img, candidate_img,
                                        label=f"rank{match.rank}"))
    _emit(json.dumps({"points": [p.to_dict() for p in points]}, indent=2)
          + "\n", params["out"])
    if params["figures"]:
        save_svg(mid_scatter(points, title="match positions"),
                 Path(params["figures"]) / "mid.svg")


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--data-dir", default=None, type=click.Path(),
              help="Persist the session store in this directory.")
@click.option("--openapi-only", is_flag=True,
              help="Write the API description to --out and exit.")
@common_options
@click.pass_context
@guarded
def serve_cmd(ctx, **_kwargs) -> None:
    """Run the HTTP API."""
    params = _merged(ctx)
    from .service import create_app, write_openapi

    if params["openapi_only"]:
        if not params["out"]:
            raise ValidationError("--openapi-only needs --out")
        write_openapi(params["out"])
        return
    import uvicorn

    uvicorn.run(create_app(params["data_dir"]), host=params["host"],
                port=params["port"], log_level="info")


if __name__ == "__main__":
    main()
