"""Batch command line interface.

Subcommands map one to one onto library operations: quantile (one
directional hyperplane), contour (full sweep + region), depth (point
depth or oracle region), km (envelope + comparison), scan (multiplier
process over directions), regress (regression quantile, cuts,
coverage), fig2 (the seeded outlier benchmark across all 15 steps).

Artifacts are deterministic: the same flags and seed produce byte
identical JSON and CSV, and SVG identical up to the version comment
line.  JSON payloads are {"meta": ..., "result": ...}; regions carry
vertex arrays plus their generating halfplanes {b, a}.  The RNG is
numpy's default_rng seeded from --seed; OS randomness is never used.

Exit codes: 0 success, 2 degenerate tau (message names the nearest
admissible levels), 3 degenerate data (message carries the offending
indices and a jitter suggestion), 1 anything else.  With --json-errors
the stderr diagnostic is machine readable JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .cloud import PointCloud, jitter
from .contour import fixed_tau_region, probability_contents, sweep
from .depth import depth_2d, depth_region_bruteforce_2d
from .directional import (
    directional_quantile,
    multiplier_scan,
    outlier_scenario,
)
from .errors import (
    DegenerateData,
    DegenerateTau,
    EmptyInput,
    HeaderMismatch,
    ParseError,
    QuantourError,
)
from .geometry import BOUNDED, EMPTY, OUTSIDE, ConvexRegion2D, Direction
from .km import EnvelopeConfig, compare_regions, km_envelope
from .regression import (
    RegressionProblem,
    coverage_diagnostic,
    fixed_x_cut,
    regression_quantile,
    response_direction_grid,
)

JITTER_DEFAULT = 1e-5
FIG2_TAU_NUM = 2.5  # tau = 2.5/n for the quantile, 0.5/n for the hull regime


@dataclass
class RunConfig:
    """One resolved invocation; see the argument parser for semantics."""

    command: str
    input: str | None = None
    tau: float | None = None
    u: tuple | None = None
    u_text: str | None = None
    x: tuple | None = None
    x0: tuple | None = None
    K: int = 201
    grid: int = 360
    bins: int = 0
    method: str = "parametric"
    phase: float = 0.0
    flag_c: float = 3.0
    seed: int = 0
    jitter_amplitude: float = JITTER_DEFAULT
    fmt: str = "json"
    output: str | None = None
    output_dir: str = "."
    json_errors: bool = False
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.tau is not None and not (0.0 < self.tau < 1.0):
            raise ValueError(f"tau must be in (0, 1), got {self.tau}")
        if self.jitter_amplitude < 0:
            raise ValueError("jitter amplitude must be nonnegative")


# ---------------------------------------------------------------------------
# ingestion


def _regression_layout(header):
    """(q, k) for a fully tagged x1..xq, y1..yk header, else None."""
    names = [h.strip().lower() for h in header]
    tagged = all(
        len(nm) >= 2 and nm[0] in "xy" and nm[1:].isdigit() for nm in names
    )
    if not tagged:
        return None
    xs = [nm for nm in names if nm[0] == "x"]
    ys = [nm for nm in names if nm[0] == "y"]
    q, k = len(xs), len(ys)
    if k == 0:
        raise HeaderMismatch("tagged header has no y columns")
    want = [f"x{i}" for i in range(1, q + 1)] + [f"y{i}" for i in range(1, k + 1)]
    if names != want:
        raise HeaderMismatch(
            f"tagged header must read x1..x{q}, y1..y{k} in order, got {names}"
        )
    return q, k


def ingest_csv(path):
    """Parse a CSV file into a cloud or a regression design.

    Returns (kind, data, warnings) with kind "cloud" (data: PointCloud)
    or "regression" (data: (X, Y) arrays).  Regression mode is chosen
    when every header name matches x<i>/y<j>; the tags must then read
    x1..xq, y1..yk in order.  Non-finite or non-numeric cells and ragged
    rows are rejected with their 1-based line number.
    """
    text = Path(path).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [(idx + 1, row) for idx, row in enumerate(rows)]
    rows = [(ln, row) for ln, row in rows if any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyInput("input file is empty")
    header_line, header = rows[0]
    layout = _regression_layout(header)
    data = []
    for ln, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, got {len(row)}", line=ln
            )
        try:
            vals = [float(cell) for cell in row]
        except ValueError:
            raise ParseError(f"non-numeric cell in {row}", line=ln)
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("non-finite value", line=ln)
        data.append(vals)
    if not data:
        raise EmptyInput()
    M = np.array(data, dtype=float)
    warnings = []
    if layout is not None:
        q, k = layout
        return "regression", (M[:, :q], M[:, q:]), warnings
    cloud = PointCloud(M)
    dups = cloud.duplicate_rows()
    if dups:
        flat = sorted({i for pair in dups for i in pair})
        warnings.append(f"multiple identical observations at rows {flat}")
    return "cloud", cloud, warnings


def apply_jitter(cloud: PointCloud, amplitude: float, seed: int) -> PointCloud:
    """Seeded uniform [-amplitude, amplitude] perturbation; 0 is identity."""
    if amplitude == 0.0:
        return cloud
    return jitter(cloud, amplitude=amplitude, seed=seed)


def _heal_cloud(config: RunConfig, data: PointCloud) -> PointCloud:
    """Jitter a degenerate cloud (seeded), or re-raise when jitter is off."""
    try:
        data.require_general_position()
    except DegenerateData as exc:
        if config.jitter_amplitude == 0.0:
            raise
        config.warnings.append(
            f"degenerate input ({exc}); applied jitter "
            f"{config.jitter_amplitude:g} with seed {config.seed}"
        )
        data = apply_jitter(data, config.jitter_amplitude, config.seed)
    return data


def _load_cloud(config: RunConfig) -> PointCloud:
    kind, data, warnings = ingest_csv(config.input)
    config.warnings.extend(warnings)
    if kind != "cloud":
        raise HeaderMismatch(
            f"the {config.command} command expects plain coordinate columns"
        )
    return _heal_cloud(config, data)


# ---------------------------------------------------------------------------
# payload builders


def region_payload(region: ConvexRegion2D) -> dict:
    """JSON-ready region: status, vertices, generating halfplanes, area."""
    payload = {
        "status": region.status,
        "vertices": [[float(v[0]), float(v[1])] for v in region.vertices],
        "halfplanes": [
            {"b": [float(h.normal[0]), float(h.normal[1])], "a": float(h.offset)}
            for h in region.halfplanes
        ],
    }
    payload["area"] = region.area() if region.status == BOUNDED else None
    return payload


def region_from_payload(payload: dict) -> ConvexRegion2D:
    """Rebuild a region from its JSON payload (round-trip helper)."""
    if payload["status"] == EMPTY or not payload["vertices"]:
        return ConvexRegion2D.empty()
    return ConvexRegion2D.from_vertices(np.array(payload["vertices"], dtype=float))


def _hyperplane_payload(h) -> dict:
    return {
        "tau": h.tau,
        "u": [float(v) for v in h.u.vector],
        "a": h.a,
        "b": [float(v) for v in h.b],
        "c": [float(v) for v in h.c],
        "multiplier": h.multiplier,
        "fitted": list(h.fitted),
        "duals": [float(v) for v in h.duals],
        "counts": list(h.counts),
    }


def _meta(config: RunConfig, cloud=None, **extra) -> dict:
    meta = {"command": config.command, "seed": config.seed}
    if config.tau is not None:
        meta["tau"] = config.tau
    if cloud is not None:
        meta["n"] = cloud.n
        meta["k"] = cloud.k
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# SVG emission


def _fmt(v: float) -> str:
    return format(float(v), ".6f")


def _view_box(points):
    pts = np.asarray(points, dtype=float)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-6)
    lo = lo - 0.1 * span
    hi = hi + 0.1 * span
    return lo, hi


class _SvgCanvas:
    """Fixed 640x480 canvas mapping data coordinates with a y-flip."""

    def __init__(self, lo, hi, width=640, height=480):
        self.lo, self.hi = lo, hi
        self.w, self.h = width, height
        span = hi - lo
        self.scale = min(width / span[0], height / span[1])
        self.elements = []

    def map(self, p):
        x = (p[0] - self.lo[0]) * self.scale
        y = self.h - (p[1] - self.lo[1]) * self.scale
        return x, y

    def circle(self, p, r, fill):
        x, y = self.map(p)
        self.elements.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{fill}"/>'
        )

    def polyline(self, pts, stroke, width=1.5, closed=False, fill="none"):
        coords = " ".join(
            f"{_fmt(x)},{_fmt(y)}" for x, y in (self.map(p) for p in pts)
        )
        tag = "polygon" if closed else "polyline"
        self.elements.append(
            f'<{tag} points="{coords}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}"/>'
        )

    def text(self, p, s, size=14):
        x, y = self.map(p)
        self.elements.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}">{s}</text>'
        )

    def line_segment(self, b, a, stroke, width=1.5):
        """Clip the line {z : b'z = a} to the data window and draw it."""
        seg = _clip_line(np.asarray(b, dtype=float), float(a), self.lo, self.hi)
        if seg is not None:
            self.polyline(seg, stroke=stroke, width=width)

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" '
            f'height="{self.h}" viewBox="0 0 {self.w} {self.h}">'
        )
        comment = f"<!-- quantour {__version__} -->"
        bg = f'<rect width="{self.w}" height="{self.h}" fill="white"/>'
        return "\n".join([head, comment, bg, *self.elements, "</svg>"]) + "\n"


def _clip_line(b, a, lo, hi):
    """Endpoints of {b'z = a} inside the [lo, hi] box, or None."""
    pts = []
    for axis in (0, 1):
        other = 1 - axis
        if abs(b[other]) < 1e-300:
            continue
        for bound in (lo[axis], hi[axis]):
            t = (a - b[axis] * bound) / b[other]
            if lo[other] - 1e-9 <= t <= hi[other] + 1e-9:
                p = np.empty(2)
                p[axis] = bound
                p[other] = t
                pts.append(p)
    uniq = []
    for p in pts:
        if not any(np.allclose(p, q, atol=1e-12) for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort(key=lambda p: (p[0], p[1]))
    return uniq[0], uniq[-1]


def _svg_cloud_region(cloud, region=None, hyperplanes=(), marks=()):
    lo, hi = _view_box(cloud.points)
    canvas = _SvgCanvas(lo, hi)
    if region is not None and region.status == BOUNDED:
        canvas.polyline(
            list(region.vertices), stroke="#1f77b4", width=2.0, closed=True,
            fill="#1f77b433",
        )
    for b, a in hyperplanes:
        canvas.line_segment(b, a, stroke="#d62728", width=2.0)
    for p in cloud.points:
        canvas.circle(p, 3, "#444444")
    for p in marks:
        canvas.circle(p, 5, "#d62728")
    return canvas.render()


# ---------------------------------------------------------------------------
# subcommands


def _parse_vector(text, k=None):
    vals = tuple(float(v) for v in text.split(","))
    if k is not None and len(vals) != k:
        raise ValueError(f"expected {k} comma-separated floats, got {text!r}")
    return vals


def _cmd_quantile(config: RunConfig):
    cloud = _load_cloud(config)
    u = Direction(np.array(config.u, dtype=float))
    h = directional_quantile(cloud, config.tau, u)
    result = _hyperplane_payload(h)
    payload = {"meta": _meta(config, cloud), "result": result}
    rows = [["field", "value"]] + [[k, json.dumps(v)] for k, v in result.items()]
    svg = None
    if config.fmt == "svg":
        svg = _svg_cloud_region(cloud, hyperplanes=[(h.b, h.a)])
    return payload, rows, svg


def _cmd_contour(config: RunConfig):
    cloud = _load_cloud(config)
    res = sweep(cloud, config.tau, method=config.method)
    region = fixed_tau_region(res)
    prob = probability_contents(region, cloud)
    arcs = [
        {
            "start": arc.start,
            "end": arc.end,
            "orientation": arc.orientation,
            "hyperplane": _hyperplane_payload(arc.hyperplane),
        }
        for arc in res.arcs
    ]
    payload = {
        "meta": _meta(config, cloud, method=res.method, n_pivots=res.n_pivots),
        "result": {
            "arcs": arcs,
            "region": region_payload(region),
            "probability": prob,
        },
    }
    rows = [["start", "end", "orientation", "i", "j", "a", "b1", "b2",
             "multiplier", "n_below"]]
    for arc in res.arcs:
        h = arc.hyperplane
        rows.append([
            repr(arc.start), repr(arc.end), arc.orientation, h.fitted[0],
            h.fitted[1], repr(h.a), repr(float(h.b[0])), repr(float(h.b[1])),
            repr(h.multiplier), h.n_below,
        ])
    svg = None
    if config.fmt == "svg":
        svg = _svg_cloud_region(cloud, region=region)
    return payload, rows, svg


def _cmd_depth(config: RunConfig):
    cloud = _load_cloud(config)
    if config.x is None and config.tau is None:
        raise ValueError("depth needs --x for a point or --tau for a region")
    result = {}
    rows = [["field", "value"]]
    region = None
    if config.x is not None:
        d = depth_2d(cloud, np.array(config.x, dtype=float))
        result["depth"] = {"count": d.count, "n": d.n, "normalized": d.normalized}
        rows += [["count", d.count], ["n", d.n], ["normalized", repr(d.normalized)]]
    if config.tau is not None:
        region = depth_region_bruteforce_2d(cloud, config.tau)
        result["region"] = region_payload(region)
        rows.append(["region_status", region.status])
    payload = {"meta": _meta(config, cloud), "result": result}
    svg = None
    if config.fmt == "svg":
        marks = [np.array(config.x)] if config.x is not None else []
        svg = _svg_cloud_region(cloud, region=region, marks=marks)
    return payload, rows, svg


def _cmd_km(config: RunConfig):
    cloud = _load_cloud(config)
    cfg = EnvelopeConfig(K=config.K, tau=config.tau, phase=config.phase)
    envelope = km_envelope(cloud, cfg)
    exact = fixed_tau_region(sweep(cloud, config.tau))
    comparison = compare_regions(exact, envelope)
    result = {
        "envelope": region_payload(envelope),
        "exact": region_payload(exact),
        "comparison": {
            "facets_exact": comparison.facets_exact,
            "facets_km": comparison.facets_km,
            "area_gap": comparison.area_gap,
            "hausdorff": comparison.hausdorff,
            "km_contains_exact": comparison.km_contains_exact,
        },
    }
    payload = {"meta": _meta(config, cloud, K=config.K), "result": result}
    rows = [["field", "value"]] + [
        [k, json.dumps(v)] for k, v in result["comparison"].items()
    ]
    svg = None
    if config.fmt == "svg":
        lo, hi = _view_box(cloud.points)
        canvas = _SvgCanvas(lo, hi)
        if envelope.status == BOUNDED:
            canvas.polyline(list(envelope.vertices), stroke="#2ca02c", width=1.5,
                            closed=True)
        if exact.status == BOUNDED:
            canvas.polyline(list(exact.vertices), stroke="#1f77b4", width=2.0,
                            closed=True, fill="#1f77b433")
        for p in cloud.points:
            canvas.circle(p, 3, "#444444")
        svg = canvas.render()
    return payload, rows, svg


def _cmd_scan(config: RunConfig):
    cloud = _load_cloud(config)
    directions = [
        Direction.from_angle(2.0 * np.pi * j / config.K) for j in range(config.K)
    ]
    series = multiplier_scan(cloud, config.tau, directions, flag_c=config.flag_c)
    flagged = set(series.flagged)
    result = {
        "entries": [
            {"label": float(lab), "multiplier": float(m), "flagged": i in flagged}
            for i, (lab, m) in enumerate(series.entries)
        ],
        "median": series.median,
        "mad": series.mad,
        "flagged": list(series.flagged),
    }
    payload = {"meta": _meta(config, cloud, K=config.K), "result": result}
    rows = [["label", "multiplier", "flagged"]]
    for i, (lab, m) in enumerate(series.entries):
        rows.append([repr(float(lab)), repr(float(m)), int(i in flagged)])
    return payload, rows, None


def _cmd_regress(config: RunConfig):
    kind, data, warnings = ingest_csv(config.input)
    config.warnings.extend(warnings)
    if kind == "cloud":
        data = _heal_cloud(config, data)
        X = np.zeros((data.n, 0))
        Y = data.points
    else:
        X, Y = data
    k = Y.shape[1]
    u = Direction(np.array(_parse_vector(config.u_text, k), dtype=float))
    rp = RegressionProblem(X, Y, config.tau, u)
    q = regression_quantile(rp)
    result = {
        "a": q.a,
        "b": [float(v) for v in q.b],
        "c": [float(v) for v in q.c],
        "multiplier": q.multiplier,
        "fitted": list(q.fitted),
        "counts": list(q.counts),
    }
    if config.bins >= 2:
        diag = coverage_diagnostic(rp, q, config.bins)
        result["coverage"] = {
            "global_fraction": diag.global_fraction,
            "deviations": list(diag.deviations),
            "bin_edges": list(diag.bin_edges),
            "bin_counts": list(diag.bin_counts),
        }
    if config.x0 is not None:
        if k != 2:
            raise ValueError("cuts are defined for k=2 response spaces")
        models = [
            regression_quantile(RegressionProblem(X, Y, config.tau, d))
            for d in response_direction_grid(config.grid)
        ]
        cut = fixed_x_cut(models, np.array(config.x0, dtype=float))
        result["cut"] = region_payload(cut)
    payload = {"meta": _meta(config, n=Y.shape[0], k=k, p=X.shape[1] + 1),
               "result": result}
    rows = [["field", "value"]] + [
        [kk, json.dumps(vv)] for kk, vv in result.items() if kk != "cut"
    ]
    return payload, rows, None


def _cmd_fig2(config: RunConfig):
    n = 99
    tau_q = FIG2_TAU_NUM / n
    tau_hull = 0.5 / n
    u0 = Direction([0.0, -1.0])
    table = []
    inside = 0
    last = None
    for ell in range(15):
        cloud = outlier_scenario(config.seed, ell)
        h = directional_quantile(cloud, tau_q, u0)
        hull = fixed_tau_region(sweep(cloud, tau_hull))
        outlier = cloud.points[-1]
        if hull.contains(outlier) != OUTSIDE:
            inside += 1
        table.append((ell, h.multiplier))
        last = (cloud, h, hull)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_path = out_dir / "fig2_lambda.csv"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ell", "lambda"])
    for ell, lam in table:
        writer.writerow([ell, repr(lam)])
    csv_path.write_text(buf.getvalue(), encoding="utf-8")

    cloud, h, hull = last
    left = _svg_cloud_region(
        cloud, region=hull, hyperplanes=[(h.b, h.a)], marks=[cloud.points[-1]]
    )
    (out_dir / "fig2_points.svg").write_text(left, encoding="utf-8")

    lams = np.array([lam for _, lam in table])
    series = np.column_stack([np.arange(15.0), lams])
    lo, hi = _view_box(series)
    canvas = _SvgCanvas(lo, hi)
    canvas.polyline(series, stroke="#1f77b4", width=2.0)
    for p in series:
        canvas.circle(p, 3, "#1f77b4")
    canvas.text((0.0, float(lams.max())), "multiplier vs outlier step")
    right = canvas.render()
    (out_dir / "fig2_multiplier.svg").write_text(right, encoding="utf-8")

    payload = {
        "meta": {"command": "fig2", "seed": config.seed, "tau": tau_q, "n": n},
        "result": {
            "table": [{"ell": ell, "multiplier": lam} for ell, lam in table],
            "outlier_inside_hull": inside,
            "artifacts": [
                str(csv_path),
                str(out_dir / "fig2_points.svg"),
                str(out_dir / "fig2_multiplier.svg"),
            ],
        },
    }
    rows = [["ell", "lambda"]] + [[ell, repr(lam)] for ell, lam in table]
    return payload, rows, None


_COMMANDS = {
    "quantile": _cmd_quantile,
    "contour": _cmd_contour,
    "depth": _cmd_depth,
    "km": _cmd_km,
    "scan": _cmd_scan,
    "regress": _cmd_regress,
    "fig2": _cmd_fig2,
}


# ---------------------------------------------------------------------------
# dispatch and emission


def _emit(config: RunConfig, payload, rows, svg) -> None:
    for w in config.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if config.fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    elif config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        text = buf.getvalue()
    elif config.fmt == "svg":
        if svg is None:
            raise ValueError(f"svg output is not defined for {config.command}")
        text = svg
    else:
        raise ValueError(f"unknown format {config.fmt!r}")
    if config.output:
        Path(config.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_error(config: RunConfig, exc: Exception, code: int) -> None:
    suggestion = None
    if code == 3:
        suggestion = (
            f"rerun with --jitter {JITTER_DEFAULT:g} (seeded with --seed) "
            "to perturb the degenerate rows"
        )
    if config.json_errors:
        doc = {
            "error": type(exc).__name__,
            "message": str(exc),
            "exit": code,
        }
        indices = getattr(exc, "indices", None)
        if indices:
            doc["indices"] = [int(i) for i in indices]
        line = getattr(exc, "line", None)
        if line is not None:
            doc["line"] = line
        if suggestion:
            doc["suggestion"] = suggestion
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)
        if suggestion:
            print(f"suggestion: {suggestion}", file=sys.stderr)


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        handler = _COMMANDS[config.command]
        payload, rows, svg = handler(config)
        _emit(config, payload, rows, svg)
        return 0
    except DegenerateTau as exc:
        _emit_error(config, exc, 2)
        return 2
    except DegenerateData as exc:
        _emit_error(config, exc, 3)
        return 3
    except (QuantourError, OSError, ValueError) as exc:
        _emit_error(config, exc, 1)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantour",
        description="Directional quantile hyperplanes, depth contours, and "
        "envelope comparisons.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True, needs_tau=False):
        if needs_input:
            p.add_argument("--input", "-i", required=True, help="CSV data file")
        p.add_argument("--tau", type=float, required=needs_tau,
                       default=None, help="quantile level in (0, 1)")
        p.add_argument("--format", dest="fmt", choices=("json", "csv", "svg"),
                       default="json")
        p.add_argument("--output", "-o", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jitter", dest="jitter_amplitude", type=float,
                       default=JITTER_DEFAULT,
                       help="degeneracy jitter amplitude, 0 disables")
        p.add_argument("--json-errors", action="store_true")

    p = sub.add_parser("quantile", help="one directional quantile hyperplane")
    common(p, needs_tau=True)
    p.add_argument("--u", required=True, help="direction, e.g. 0,1")

    p = sub.add_parser("contour", help="full direction sweep and region")
    common(p, needs_tau=True)
    p.add_argument("--method", choices=("parametric", "enumerate"),
                   default="parametric")

    p = sub.add_parser("depth", help="point depth and oracle region")
    common(p)
    p.add_argument("--x", default=None, help="query point, e.g. 0.1,0.2")

    p = sub.add_parser("km", help="directional envelope vs exact region")
    common(p, needs_tau=True)
    p.add_argument("--K", type=int, default=201, help="number of directions")
    p.add_argument("--phase", type=float, default=0.0)

    p = sub.add_parser("scan", help="multiplier process over directions")
    common(p, needs_tau=True)
    p.add_argument("--K", type=int, default=64)
    p.add_argument("--flag-c", dest="flag_c", type=float, default=3.0)

    p = sub.add_parser("regress", help="regression quantile, cut, coverage")
    common(p, needs_tau=True)
    p.add_argument("--u", required=True, help="response direction")
    p.add_argument("--bins", type=int, default=0,
                   help="coverage diagnostic bins (0 skips)")
    p.add_argument("--x0", default=None, help="regressor point for a cut")
    p.add_argument("--grid", type=int, default=360,
                   help="directions for cut assembly")

    p = sub.add_parser("fig2", help="seeded outlier benchmark, 15 steps")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--output-dir", dest="output_dir", default=".")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"),
                   default="json")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--json-errors", action="store_true")
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("input", "tau", "K", "bins", "grid", "method", "phase",
                 "flag_c", "seed", "jitter_amplitude", "fmt", "output",
                 "output_dir", "json_errors"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "u", None) is not None:
        if args.command == "regress":
            cfg.u_text = args.u
        else:
            cfg.u = _parse_vector(args.u)
    if getattr(args, "x", None) is not None:
        cfg.x = _parse_vector(args.x, 2)
    if getattr(args, "x0", None) is not None:
        cfg.x0 = _parse_vector(args.x0)
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
