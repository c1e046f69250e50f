"""Command-line surface: every analysis as a reproducible report generator.

Subcommands: ``fields``, ``verify``, ``plan``, ``analyze``, ``stats``,
``loglik``, ``losses``.  Reports carry a header block naming the tool
version, subcommand and parameters, and identical invocations produce
byte-identical output (randomized steps are seeded; the default seed is 7).

Exit codes: 0 success; 1 input or usage error; 2 a verification or
consistency check failed.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click
import numpy as np

from . import __version__
from .archgraph import ArchError, ArchSpec, load_arch, stylegan2_preset
from .fields import CSV_COLUMNS, fields_table, table_csv
from .fileio import load_landmarks_csv, load_vectors_csv, read_pgm, read_ppm
from .losses import (
    DEFAULT_ALPHA,
    DEFAULT_LAMBDAS,
    EulerAngles,
    identity_loss,
    landmark_loss,
    pose_loss,
    reconstruction_loss,
    total_loss,
)
from .oracle import (
    DEFAULT_SEED,
    MATCH_OVER,
    Semantics,
    VERIFY_CSV_COLUMNS,
    numeric_footprint,
    verify_arch,
)
from .regularizer import (
    DEFAULT_EPSILON_FLOOR,
    estimate_stats,
    load_stats_csv,
    log_likelihood,
    log_likelihood_grad,
    stats_csv,
)
from .sparsity import (
    DEFAULT_BINS,
    DEFAULT_TOP_K,
    mean_histogram,
    reuse_rates,
    topk_set,
)
from .stylespace import mask_rle, plan_by_gf, plan_by_layers, style_layout

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CHECK_FAILURE = 2

FD_STEP = 1e-5
FD_TOLERANCE = 1e-6

# Named control-unit configurations: contiguous layer ranges of the
# stylegan2-256 stack used in the published field-threshold experiments.
PLAN_CONFIGS = {
    1: ("conv0", "conv7"),
    2: ("conv0", "conv4"),
    3: ("conv0", "conv2"),
    4: ("conv3", "conv6"),
    5: ("conv6", "conv11"),
}


class CheckFailure(Exception):
    """A report was produced but a verification/consistency check failed."""


def _input_errors(fn):
    """Convert library and file errors into usage errors (exit code 1)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ArchError, ValueError, OSError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _header_lines(subcommand: str, params: dict) -> list[str]:
    rendered = " ".join(f"{k}={v}" for k, v in params.items())
    return [
        f"# genfields {__version__}",
        f"# subcommand: {subcommand}",
        f"# parameters: {rendered}",
    ]


def _meta(subcommand: str, params: dict) -> dict:
    return {
        "tool": "genfields",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": {k: str(v) for k, v in params.items()},
    }


def _render_table(columns, rows) -> list[str]:
    cells = [[str(c) for c in columns]] + [[str(r[i]) for i in range(len(columns))] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = []
    for row in cells:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return lines


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _resolve_arch(preset: str | None, arch_path: str | None) -> ArchSpec:
    if (preset is None) == (arch_path is None):
        raise click.ClickException("pass exactly one of --preset or --arch")
    if preset is not None:
        name = preset.removeprefix("stylegan2-")
        try:
            resolution = int(name)
        except ValueError:
            raise click.ClickException(
                f"unknown preset {preset!r}; use e.g. stylegan2-256"
            ) from None
        return stylegan2_preset(resolution)
    return load_arch(arch_path)


def _parse_layer_span(spec: str) -> tuple[str, str]:
    first, sep, last = spec.partition("..")
    if not sep or not first or not last:
        raise click.ClickException(f"layer range must look like conv0..conv7, got {spec!r}")
    return first, last


def _fmt_float(x: float) -> str:
    return repr(float(x))


@click.group()
@click.version_option(version=__version__, prog_name="genfields")
def cli():
    """Static generative-field analysis for convolutional generator stacks.

    Computes analytic generative fields, verifies them against brute-force
    influence oracles, plans style-space control masks by field thresholds,
    and evaluates control-signal sparsity, Gaussian style regularization and
    editing losses.  All randomized steps are seeded (default seed 7).
    """


# ---------------------------------------------------------------- fields ---

@cli.command("fields")
@click.option("--preset", help="Built-in architecture, e.g. stylegan2-256.")
@click.option("--arch", "arch_path", type=click.Path(), help="Architecture file to analyze.")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--output", type=click.Path(), default=None, help="Write the report to a file.")
@_input_errors
def cmd_fields(preset, arch_path, fmt, output):
    """Emit the per-layer generative field table."""
    arch = _resolve_arch(preset, arch_path)
    table = fields_table(arch)
    params = {"arch": arch.name, "format": fmt}
    rows = [
        (r.layer_id, r.style_label or "", r.input_resolution, r.generative_field, r.channels_in)
        for r in table.records
    ]
    if fmt == "json":
        payload = _meta("fields", params)
        payload["records"] = [
            {
                "layer_id": r.layer_id,
                "style_label": r.style_label,
                "input_resolution": r.input_resolution,
                "generative_field": r.generative_field,
                "channels_in": r.channels_in,
            }
            for r in table.records
        ]
        payload["notes"] = list(table.notes)
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        lines = _header_lines("fields", params)
        lines += [f"# note: {n}" for n in table.notes]
        text = "\n".join(lines) + "\n" + table_csv(table)
    else:
        lines = _header_lines("fields", params)
        lines += _render_table(CSV_COLUMNS, rows)
        lines += [f"note: {n}" for n in table.notes]
        text = "\n".join(lines) + "\n"
    _emit(text, output)


# ---------------------------------------------------------------- verify ---

@cli.command("verify")
@click.option("--preset", help="Built-in architecture, e.g. stylegan2-256.")
@click.option("--arch", "arch_path", type=click.Path(), help="Architecture file to verify.")
@click.option(
    "--semantics",
    type=click.Choice([s.value for s in Semantics]),
    default=Semantics.ZERO_INSERT.value,
    show_default=True,
)
@click.option("--sim-base", type=int, default=16, show_default=True,
              help="Simulated base resolution (replaces the architecture's).")
@click.option("--layers", "layer_span", default=None, help="Restrict to a range, e.g. conv0..conv3.")
@click.option("--numeric", is_flag=True, help="Also run the numeric executor and check agreement.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--output", type=click.Path(), default=None)
@_input_errors
def cmd_verify(preset, arch_path, semantics, sim_base, layer_span, numeric, seed, fmt, output):
    """Measure impulse footprints and compare them with the analytic fields.

    Footprints below the analytic value are expected for upsampling stacks;
    a footprint above it is classified OVER-BUG and the command exits 2.
    """
    arch = _resolve_arch(preset, arch_path)
    sem = Semantics(semantics)
    indices = None
    if layer_span:
        first, last = _parse_layer_span(layer_span)
        lo, hi = arch.layer_index(first), arch.layer_index(last)
        if lo > hi:
            raise click.ClickException(f"layer range {layer_span!r} is reversed")
        indices = tuple(range(lo, hi + 1))
    results = verify_arch(arch, sem, sim_base, dims=1, layers=indices)

    disagreements = []
    if numeric:
        for res in results:
            num = numeric_footprint(arch, res.layer_index, sem, sim_base, seed=seed)
            if num.footprint != res.footprint:
                layer_id = arch.layers[res.layer_index].id
                disagreements.append(
                    f"{layer_id}: numeric footprint {num.footprint} != boolean {res.footprint}"
                )

    params = {"arch": arch.name, "semantics": sem.value, "sim_base": sim_base, "format": fmt}
    if layer_span:
        params["layers"] = layer_span
    if numeric:
        params["numeric"] = "true"
        params["seed"] = seed

    rows = [
        (
            arch.layers[r.layer_index].id,
            r.analytic,
            r.footprint,
            r.semantics.value,
            str(r.clipped).lower(),
            r.match_class,
        )
        for r in results
    ]
    notes = []
    if numeric:
        notes.append(
            "numeric executor agreement: " + ("ok" if not disagreements else "FAILED")
        )
        notes.extend(disagreements)

    if fmt == "json":
        payload = _meta("verify", params)
        payload["results"] = [
            dict(zip(("layer_id", "analytic", "footprint", "semantics", "clipped", "match_class"), row))
            for row in rows
        ]
        payload["notes"] = notes
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        lines = _header_lines("verify", params)
        lines += [f"# note: {n}" for n in notes]
        body = [",".join(VERIFY_CSV_COLUMNS)]
        body += [",".join(str(c) for c in row) for row in rows]
        text = "\n".join(lines + body) + "\n"
    else:
        lines = _header_lines("verify", params)
        lines += _render_table(VERIFY_CSV_COLUMNS, rows)
        lines += [f"note: {n}" for n in notes]
        text = "\n".join(lines) + "\n"
    _emit(text, output)

    over = [row for row in rows if row[5] == MATCH_OVER]
    if over:
        raise CheckFailure(f"verification found {len(over)} OVER-BUG row(s)")
    if disagreements:
        raise CheckFailure(f"numeric executor disagreed on {len(disagreements)} layer(s)")


# ------------------------------------------------------------------ plan ---

@cli.command("plan")
@click.option("--preset", help="Built-in architecture, e.g. stylegan2-256.")
@click.option("--arch", "arch_path", type=click.Path(), help="Architecture file to plan against.")
@click.option("--config", "config_index", type=click.IntRange(1, 5), default=None,
              help="Named control-unit configuration (1..5).")
@click.option("--min-gf", type=int, default=None, help="Smallest generative field to enable.")
@click.option("--max-gf", type=int, default=None, help="Largest generative field to enable.")
@click.option("--layers", "layer_span", default=None, help="Explicit range, e.g. conv0..conv7.")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--output", type=click.Path(), default=None)
@_input_errors
def cmd_plan(preset, arch_path, config_index, min_gf, max_gf, layer_span, fmt, output):
    """Build a control-signal mask plan from field thresholds or layer ranges."""
    arch = _resolve_arch(preset, arch_path)
    table = fields_table(arch)
    layout = style_layout(arch)

    by_gf = min_gf is not None or max_gf is not None
    modes = sum([config_index is not None, by_gf, layer_span is not None])
    if modes != 1:
        raise click.ClickException(
            "pass exactly one selection mode: --config, --min-gf/--max-gf, or --layers"
        )
    if by_gf and (min_gf is None or max_gf is None):
        raise click.ClickException("--min-gf and --max-gf must be given together")

    if config_index is not None:
        first, last = PLAN_CONFIGS[config_index]
        plan = plan_by_layers(table, layout, first, last)
        params = {"arch": arch.name, "config": config_index, "format": fmt}
    elif by_gf:
        plan = plan_by_gf(table, layout, min_gf, max_gf)
        params = {"arch": arch.name, "min_gf": min_gf, "max_gf": max_gf, "format": fmt}
    else:
        first, last = _parse_layer_span(layer_span)
        plan = plan_by_layers(table, layout, first, last)
        params = {"arch": arch.name, "layers": layer_span, "format": fmt}

    rle = " ".join(f"{value}*{run}" for value, run in mask_rle(plan.mask))
    enabled = set(plan.enabled_layers)
    rows = [
        (
            r.layer_id,
            r.style_label or "",
            table.record(r.layer_id).generative_field,
            r.start,
            r.stop,
            str(r.layer_id in enabled).lower(),
        )
        for r in layout.ranges
    ]
    columns = ("layer_id", "style_label", "generative_field", "dim_start", "dim_stop", "enabled")
    summary = [
        f"enabled_layers: {' '.join(plan.enabled_layers)}",
        f"gf_range: ({plan.gf_range[0]}, {plan.gf_range[1]})",
        f"enabled_dims: {plan.enabled_dims} of {layout.total_dims}",
        f"mask_rle: {rle}",
    ]

    if fmt == "json":
        payload = _meta("plan", params)
        payload["enabled_layers"] = list(plan.enabled_layers)
        payload["gf_range"] = list(plan.gf_range)
        payload["total_dims"] = layout.total_dims
        payload["enabled_dims"] = plan.enabled_dims
        payload["mask_rle"] = [[value, run] for value, run in mask_rle(plan.mask)]
        payload["layers"] = [dict(zip(columns, row)) for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        lines = _header_lines("plan", params)
        lines += [f"# {s}" for s in summary]
        body = [",".join(columns)] + [",".join(str(c) for c in row) for row in rows]
        text = "\n".join(lines + body) + "\n"
    else:
        lines = _header_lines("plan", params) + summary + _render_table(columns, rows)
        text = "\n".join(lines) + "\n"
    _emit(text, output)


# --------------------------------------------------------------- analyze ---

@cli.command("analyze")
@click.argument("deltas_csv", type=click.Path())
@click.option("--top-k", type=int, default=DEFAULT_TOP_K, show_default=True)
@click.option("--bins", type=int, default=DEFAULT_BINS, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--output", type=click.Path(), default=None)
@click.option("--membership-out", type=click.Path(), default=None,
              help="Write the per-test top-k membership matrix as CSV.")
@_input_errors
def cmd_analyze(deltas_csv, top_k, bins, fmt, output, membership_out):
    """Sparsity report over control signals (one test per CSV row)."""
    deltas = load_vectors_csv(deltas_csv)
    report = mean_histogram(list(deltas), bins=bins)
    sets = [topk_set(row, top_k) for row in deltas]
    reuse = reuse_rates(sets)

    zero_rows = [i for i, row in enumerate(deltas) if not np.any(row)]
    notes = [
        f"test {i} is all-zero; normalized to zeros (whole mass in bin 0)" for i in zero_rows
    ]

    params = {
        "input": deltas_csv,
        "tests": deltas.shape[0],
        "dims": deltas.shape[1],
        "top_k": top_k,
        "bins": bins,
        "format": fmt,
    }
    if fmt == "json":
        payload = _meta("analyze", params)
        payload["bins_mean"] = [float(v) for v in report.bins_mean]
        payload["bins_std"] = [float(v) for v in report.bins_std]
        payload["high_functional_count"] = report.high_functional_count
        payload["union_dims"] = list(reuse.union_dims)
        payload["rates"] = {str(d): reuse.rates[d] for d in reuse.union_dims}
        payload["membership"] = reuse.membership.tolist()
        payload["notes"] = notes
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        lines = _header_lines("analyze", params)
        lines += [f"# note: {n}" for n in notes]
        lines.append("# bins_mean: " + " ".join(_fmt_float(v) for v in report.bins_mean))
        lines.append("# bins_std: " + " ".join(_fmt_float(v) for v in report.bins_std))
        lines.append(f"# high_functional_count: {_fmt_float(report.high_functional_count)}")
        body = ["dim,reuse_rate"]
        body += [f"{d},{_fmt_float(reuse.rates[d])}" for d in reuse.union_dims]
        text = "\n".join(lines + body) + "\n"
    else:
        lines = _header_lines("analyze", params)
        lines.append("bins_mean: " + " ".join(_fmt_float(v) for v in report.bins_mean))
        lines.append("bins_std: " + " ".join(_fmt_float(v) for v in report.bins_std))
        lines.append(f"high_functional_count: {_fmt_float(report.high_functional_count)}")
        lines.append(f"union_size: {len(reuse.union_dims)}")
        lines.append("union_dims: " + " ".join(str(d) for d in reuse.union_dims))
        lines += _render_table(
            ("dim", "reuse_rate"),
            [(d, _fmt_float(reuse.rates[d])) for d in reuse.union_dims],
        )
        lines += [f"note: {n}" for n in notes]
        text = "\n".join(lines) + "\n"
    _emit(text, output)

    if membership_out:
        header = "test," + ",".join(f"d{d}" for d in reuse.union_dims)
        lines = [header]
        for t in range(reuse.membership.shape[0]):
            lines.append(f"{t}," + ",".join(str(int(v)) for v in reuse.membership[t]))
        with open(membership_out, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")


# ----------------------------------------------------------------- stats ---

@cli.command("stats")
@click.argument("styles_csv", type=click.Path())
@click.option("--epsilon-floor", type=float, default=DEFAULT_EPSILON_FLOOR, show_default=True)
@click.option("--output", type=click.Path(), default=None)
@_input_errors
def cmd_stats(styles_csv, epsilon_floor, output):
    """Estimate per-channel Gaussian statistics from style vectors (CSV rows)."""
    styles = load_vectors_csv(styles_csv)
    stats = estimate_stats(styles, epsilon_floor=epsilon_floor)
    params = {
        "input": styles_csv,
        "samples": stats.sample_count,
        "dims": stats.dims,
        "epsilon_floor": epsilon_floor,
    }
    text = "\n".join(_header_lines("stats", params)) + "\n" + stats_csv(stats)
    _emit(text, output)


# ---------------------------------------------------------------- loglik ---

@cli.command("loglik")
@click.argument("stats_csv_path", metavar="STATS_CSV", type=click.Path())
@click.argument("samples_csv", type=click.Path())
@click.option("--grad", "with_grad", is_flag=True, help="Also print the analytic gradient.")
@click.option("--fd-check", is_flag=True,
              help="Check the gradient against central finite differences (exit 2 on mismatch).")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--output", type=click.Path(), default=None)
@_input_errors
def cmd_loglik(stats_csv_path, samples_csv, with_grad, fd_check, fmt, output):
    """Log-likelihood of style vectors under estimated channel statistics."""
    stats = load_stats_csv(stats_csv_path)
    samples = load_vectors_csv(samples_csv)
    if samples.shape[1] != stats.dims:
        raise click.ClickException(
            f"sample dimension {samples.shape[1]} does not match statistics dimension {stats.dims}"
        )

    values = [log_likelihood(row, stats) for row in samples]
    grads = [log_likelihood_grad(row, stats) for row in samples] if (with_grad or fd_check) else None

    fd_errors = []
    if fd_check:
        for row, grad in zip(samples, grads):
            fd = np.empty_like(grad)
            for i in range(row.size):
                bumped = row.copy()
                bumped[i] += FD_STEP
                hi = log_likelihood(bumped, stats)
                bumped[i] = row[i] - FD_STEP
                lo = log_likelihood(bumped, stats)
                fd[i] = (hi - lo) / (2 * FD_STEP)
            fd_errors.append(float(np.max(np.abs(fd - grad) / (1.0 + np.abs(grad)))))

    params = {"stats": stats_csv_path, "samples": samples_csv, "format": fmt}
    if fd_check:
        params["fd_step"] = FD_STEP
    notes = []
    if fd_check:
        worst = max(fd_errors)
        ok = worst < FD_TOLERANCE
        notes.append(
            f"finite-difference check: max relative error {worst:.3e} "
            f"({'ok' if ok else 'FAILED'}, tolerance {FD_TOLERANCE:.0e})"
        )

    if fmt == "json":
        payload = _meta("loglik", params)
        payload["log_likelihood"] = values
        if with_grad:
            payload["gradient"] = [[float(v) for v in g] for g in grads]
        if fd_check:
            payload["fd_max_relative_error"] = fd_errors
        payload["notes"] = notes
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        lines = _header_lines("loglik", params)
        lines += [f"# note: {n}" for n in notes]
        if with_grad:
            dim = stats.dims
            header = "sample,loglik," + ",".join(f"g{i}" for i in range(dim))
            body = [header]
            for t, (v, g) in enumerate(zip(values, grads)):
                body.append(f"{t},{_fmt_float(v)}," + ",".join(_fmt_float(x) for x in g))
        else:
            body = ["sample,loglik"]
            body += [f"{t},{_fmt_float(v)}" for t, v in enumerate(values)]
        text = "\n".join(lines + body) + "\n"
    else:
        lines = _header_lines("loglik", params)
        for t, v in enumerate(values):
            lines.append(f"sample {t}: loglik = {_fmt_float(v)}")
            if with_grad:
                lines.append("  gradient: " + " ".join(_fmt_float(x) for x in grads[t]))
        lines += [f"note: {n}" for n in notes]
        text = "\n".join(lines) + "\n"
    _emit(text, output)

    if fd_check and max(fd_errors) >= FD_TOLERANCE:
        raise CheckFailure("analytic gradient disagrees with finite differences")


# ---------------------------------------------------------------- losses ---

def _parse_triple(text: str, what: str) -> tuple[float, float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise click.ClickException(f"{what} must be three comma-separated numbers, got {text!r}")
    try:
        a, b, c = (float(p) for p in parts)
    except ValueError:
        raise click.ClickException(f"{what} must be numeric, got {text!r}") from None
    return a, b, c


def _load_single_embedding(path: str) -> np.ndarray:
    rows = load_vectors_csv(path)
    if rows.shape[0] != 1:
        raise click.ClickException(f"{path}: expected a single embedding row, got {rows.shape[0]}")
    return rows[0]


def _load_single_face(path: str) -> np.ndarray:
    faces = load_landmarks_csv(path)
    if len(faces) != 1:
        raise click.ClickException(f"{path}: expected landmarks for one face, got {len(faces)}")
    return faces[0]


def _load_image(path: str) -> np.ndarray:
    if path.endswith(".ppm"):
        return read_ppm(path)
    if path.endswith(".pgm"):
        return read_pgm(path)
    raise click.ClickException(f"{path}: image must be a .ppm (P6) or .pgm (P5) file")


@cli.command("losses")
@click.option("--components", default=None,
              help="Skip inputs and combine precomputed id,attr,rec components.")
@click.option("--id-embedding", type=click.Path(), default=None)
@click.option("--out-embedding", type=click.Path(), default=None)
@click.option("--attr-landmarks", type=click.Path(), default=None)
@click.option("--out-landmarks", type=click.Path(), default=None)
@click.option("--attr-angles", default=None, help="yaw,pitch,roll for the attribute image.")
@click.option("--out-angles", default=None, help="yaw,pitch,roll for the edited image.")
@click.option("--attr-image", type=click.Path(), default=None)
@click.option("--out-image", type=click.Path(), default=None)
@click.option("--same-inputs", is_flag=True,
              help="Attribute and identity images are the same source (enables the pixel term).")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True)
@click.option("--lambdas", default=None, help="Loss weights id,attr,rec (default 1,0.01,0.02).")
@click.option("--scales", type=int, default=5, show_default=True,
              help="MS-SSIM scale count (1..5).")
@click.option("--all-landmarks", is_flag=True, help="Use all 68 landmarks, not the 51 inner ones.")
@click.option("--degrees", is_flag=True, help="Interpret --attr-angles/--out-angles in degrees.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--output", type=click.Path(), default=None)
@_input_errors
def cmd_losses(components, id_embedding, out_embedding, attr_landmarks, out_landmarks,
               attr_angles, out_angles, attr_image, out_image, same_inputs, alpha,
               lambdas, scales, all_landmarks, degrees, fmt, output):
    """Evaluate editing loss components and their weighted total."""
    lam = _parse_triple(lambdas, "--lambdas") if lambdas else DEFAULT_LAMBDAS

    if components is not None:
        l_id, l_attr, l_rec = _parse_triple(components, "--components")
        parts = {"identity_loss": l_id, "attr_loss": l_attr, "reconstruction_loss": l_rec}
    else:
        parts = {}
        l_id = l_attr = l_rec = 0.0
        if (id_embedding is None) != (out_embedding is None):
            raise click.ClickException("--id-embedding and --out-embedding must be given together")
        if id_embedding:
            l_id = identity_loss(
                _load_single_embedding(id_embedding), _load_single_embedding(out_embedding)
            )
            parts["identity_loss"] = l_id
        if (attr_landmarks is None) != (out_landmarks is None):
            raise click.ClickException(
                "--attr-landmarks and --out-landmarks must be given together"
            )
        l_lnd = l_pose = None
        if attr_landmarks:
            l_lnd = landmark_loss(
                _load_single_face(attr_landmarks),
                _load_single_face(out_landmarks),
                inner_only=not all_landmarks,
            )
            parts["landmark_loss"] = l_lnd
        if (attr_angles is None) != (out_angles is None):
            raise click.ClickException("--attr-angles and --out-angles must be given together")
        if attr_angles:
            scale = math.pi / 180.0 if degrees else 1.0
            a = EulerAngles(*(v * scale for v in _parse_triple(attr_angles, "--attr-angles")))
            b = EulerAngles(*(v * scale for v in _parse_triple(out_angles, "--out-angles")))
            l_pose = pose_loss(a, b)
            parts["pose_loss"] = l_pose
        if l_lnd is not None or l_pose is not None:
            l_attr = (l_lnd or 0.0) + (l_pose or 0.0)
            parts["attr_loss"] = l_attr
        if (attr_image is None) != (out_image is None):
            raise click.ClickException("--attr-image and --out-image must be given together")
        if attr_image:
            l_rec = reconstruction_loss(
                _load_image(attr_image),
                _load_image(out_image),
                alpha=alpha,
                same_inputs=same_inputs,
                scales=scales,
            )
            parts["reconstruction_loss"] = l_rec
        if not parts:
            raise click.ClickException("no inputs given; see --help for the accepted pairs")

    total = total_loss(l_id, l_attr, l_rec, *lam)
    params = {
        "alpha": alpha,
        "lambdas": ",".join(_fmt_float(v) for v in lam),
        "format": fmt,
    }
    if components is not None:
        params["components"] = components

    if fmt == "json":
        payload = _meta("losses", params)
        payload["components"] = {k: float(v) for k, v in parts.items()}
        payload["total_loss"] = float(total)
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = _header_lines("losses", params)
        lines += [f"{k} = {_fmt_float(v)}" for k, v in parts.items()]
        lines.append(f"total_loss = {_fmt_float(total)}")
        text = "\n".join(lines) + "\n"
    _emit(text, output)


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except CheckFailure as exc:
        click.echo(f"check failed: {exc}", err=True)
        return EXIT_CHECK_FAILURE
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT_ERROR
    except click.exceptions.Abort:
        return EXIT_INPUT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
