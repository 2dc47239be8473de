"""SVG drawings of the annulus complex and of the branched annulus in the unit disk.

Only ``<path>`` elements are emitted, with ``<title>`` children as labels.
Coordinates use fixed-point formatting so output is byte-identical for
identical input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .annulus import (
    TWO_PI,
    AnnulusComplex,
    annulus_to_disk,
    modulus_of_height,
    normalize_angle,
    to_disk,
)
from .errors import InputError, MissingTraces
from .lifting import DEFAULT_POLICY, StepPolicy, _correct, trace_direction_set, trace_level_set
from .poly import CriticalData, Polynomial

DEFAULT_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")
CRITICAL_OFFSET = 1e-3


@dataclass(frozen=True)
class RenderConfig:
    alpha: float
    beta: float
    samples_per_curve: int = 512
    palette: tuple[str, ...] = DEFAULT_PALETTE
    canvas_size: int = 1000

    def validate(self, cvl=None) -> None:
        if not 0 < self.beta < self.alpha:
            raise InputError("render config needs 0 < beta < alpha")
        if self.samples_per_curve < 2 or self.canvas_size <= 0 or not self.palette:
            raise InputError("render config needs samples_per_curve >= 2, canvas_size > 0 and a palette")
        if cvl is not None:
            m = float(np.min(np.abs(_values(cvl))))
            if not self.alpha < 0.5 * m:
                raise InputError(f"alpha {self.alpha} must be below half the smallest critical-value modulus {m}")


def _values(cvl) -> np.ndarray:
    return np.asarray(cvl.values if hasattr(cvl, "values") else cvl, dtype=complex)


def default_config(cvl, samples_per_curve: int = 512, canvas_size: int = 1000) -> RenderConfig:
    alpha = 0.4 * float(np.min(np.abs(_values(cvl))))
    return RenderConfig(alpha, alpha / 2, samples_per_curve, DEFAULT_PALETTE, canvas_size)


# -- svg helpers ------------------------------------------------------------------

def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    def __init__(self, size: int):
        self.size = size
        self.items: list[str] = []

    def xy(self, z: complex) -> tuple[str, str]:
        h = self.size / 2
        return _fmt(h * (1 + 0.96 * z.real)), _fmt(h * (1 - 0.96 * z.imag))

    def scale(self, r: float) -> float:
        return self.size / 2 * 0.96 * r

    def _emit(self, d: str, cls: str, stroke: str, fill: str, width: float, title: str | None):
        attrs = f'class="{cls}" d="{d}" fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(width)}"'
        if title is None:
            self.items.append(f"<path {attrs}/>")
        else:
            self.items.append(f"<path {attrs}><title>{title}</title></path>")

    def polyline(self, pts: np.ndarray, cls: str, stroke: str, closed: bool = False, width: float = 1.0,
                 title: str | None = None):
        coords = [" ".join(self.xy(complex(z))) for z in pts]
        d = "M " + " L ".join(coords) + (" Z" if closed else "")
        self._emit(d, cls, stroke, "none", width, title)

    def circle(self, center: complex, radius: float, cls: str, stroke: str, fill: str = "none",
               width: float = 1.0, title: str | None = None):
        r = _fmt(self.scale(radius))
        x0, y = self.xy(center + radius)
        x1, _ = self.xy(center - radius)
        d = f"M {x0} {y} A {r} {r} 0 1 0 {x1} {y} A {r} {r} 0 1 0 {x0} {y} Z"
        self._emit(d, cls, stroke, fill, width, title)

    def dot(self, center: complex, cls: str, color: str, title: str):
        self.circle(center, 4.0 / (self.size / 2 * 0.96), cls, color, color, 1.0, title)

    def document(self) -> str:
        n = self.size
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{n}" height="{n}" '
                f'viewBox="0 0 {n} {n}">')
        return "\n".join([head] + self.items + ["</svg>"]) + "\n"


def _complex_label(z: complex) -> str:
    return f"{z.real:.6f}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.6f}i"


def _grey(i: int, n: int) -> str:
    v = int(round(40 + 160 * (i / max(n - 1, 1))))
    return f"#{v:02x}{v:02x}{v:02x}"


def resample(curve: np.ndarray, n: int, closed: bool = False, keep: list[int] | None = None) -> np.ndarray:
    """Arc-length resampling to ``n`` points; indices in ``keep`` survive exactly."""
    curve = np.asarray(curve, dtype=complex)
    if closed and curve[0] != curve[-1]:
        curve = np.append(curve, curve[0])
    anchors = sorted(set([0, len(curve) - 1] + list(keep or [])))
    lengths = [float(np.sum(np.abs(np.diff(curve[a:b + 1])))) for a, b in zip(anchors, anchors[1:])]
    total = sum(lengths) or 1.0
    out = []
    for (a, b), ln in zip(zip(anchors, anchors[1:]), lengths):
        piece = curve[a:b + 1]
        m = max(2, int(round(n * ln / total)))
        s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(piece)))])
        if s[-1] == 0:
            out.append(piece[:1])
            continue
        grid = np.linspace(0, s[-1], m)
        seg = np.interp(grid, s, piece.real) + 1j * np.interp(grid, s, piece.imag)
        out.append(seg[:-1])
    out.append(curve[-1:])
    res = np.concatenate(out)
    return res[:-1] if closed else res


# -- annulus complex ---------------------------------------------------------------

def render_annulus_complex(cells: AnnulusComplex, cvl, cfg: RenderConfig) -> str:
    cfg.validate()
    cv = _values(cvl)
    cv = np.unique(cv.round(12))
    cnv = _Canvas(cfg.canvas_size)
    inner = cfg.beta / math.sqrt(cfg.beta ** 2 + 1)
    cnv.circle(0j, 1.0, "boundary", "#000000", title="height 1")
    cnv.circle(0j, inner, "boundary", "#000000", title="height -1")
    for i, t in enumerate(cells.critical_heights):
        r = abs(complex(annulus_to_disk(0.0, t, cfg.alpha, cfg.beta)))
        cnv.circle(0j, r, "latitude", _grey(i, cells.ell), title=f"height {t:.6f}")
    for j, u in enumerate(cells.critical_arguments):
        e = complex(math.cos(u), math.sin(u))
        cnv.polyline(np.array([inner * e, e]), "longitude", cfg.palette[j % len(cfg.palette)],
                     title=f"argument {u:.6f}")
    for c in cv:
        t = ((abs(c) ** 2) - 1) / ((abs(c) ** 2) + 1)
        z = complex(annulus_to_disk(float(np.angle(c)), t, cfg.alpha, cfg.beta))
        cnv.dot(z, "critical-value", "#000000", f"critical value {_complex_label(complex(c))}")
    return cnv.document()


# -- branched annulus ---------------------------------------------------------------

@dataclass
class DrawingTraces:
    """Plane curves for the branched drawing, before the disk map."""

    roots: np.ndarray
    critical_points: np.ndarray
    root_circles: list[np.ndarray]
    level_families: list[list[np.ndarray]]  # one family per critical height, closed curves
    level_keep: list[list[list[int]]]
    direction_families: list[list[np.ndarray]]  # one family per critical argument
    direction_keep: list[list[list[int]]]
    heights: list[float] = field(default_factory=list)
    arguments: list[float] = field(default_factory=list)


def _insert_vertex(curves: list[np.ndarray], keep: list[list[int]], b: complex, count: int) -> None:
    """Move the nearest sample of each of the ``count`` closest curves onto ``b``."""
    dist = [float(np.min(np.abs(c - b))) for c in curves]
    for i in np.argsort(dist, kind="stable")[:count]:
        j = int(np.argmin(np.abs(curves[i] - b)))
        curves[i] = curves[i].copy()
        curves[i][j] = b
        keep[i].append(j)


def _trim_strand(p: Polynomial, pts: np.ndarray, u: float, beta: float) -> np.ndarray:
    """Part of a root strand with |p| >= beta, starting exactly on the root circle."""
    mods = np.abs(p(pts))
    i = int(np.searchsorted(mods, beta))
    if i == 0:
        return pts
    w = beta * complex(math.cos(u), math.sin(u))
    ok, z = _correct(p.coeffs, np.array([pts[i - 1]]), w, DEFAULT_POLICY, iterations=20)
    return np.concatenate([z, pts[i:]]) if ok else pts[i:]


def collect_drawing_traces(p: Polynomial, roots, crit: CriticalData, cells: AnnulusComplex, cfg: RenderConfig,
                           policy: StepPolicy = DEFAULT_POLICY) -> DrawingTraces:
    rts = np.asarray(roots.values if hasattr(roots, "values") else roots, dtype=complex)
    cv = crit.critical_values.values
    cps = crit.critical_points.entries
    t_beta = (cfg.beta ** 2 - 1) / (cfg.beta ** 2 + 1)
    base = trace_level_set(p, t_beta, rts, cv, policy)
    circles = []
    for j in range(len(rts)):
        comp = next(c for i, c in enumerate(base.components) if base.enclosed_roots(i) == (j,))
        circles.append(comp.curve)

    level_fams, level_keep = [], []
    moduli = [float(modulus_of_height(t)) for t in cells.critical_heights]
    for i, r in enumerate(moduli):
        lower = moduli[i - 1] if i else 0.0
        r_off = r - CRITICAL_OFFSET * (r - lower)
        t_off = (r_off ** 2 - 1) / (r_off ** 2 + 1)
        tr = trace_level_set(p, t_off, rts, cv, policy)
        curves = [c.curve for c in tr.components]
        keep = [[] for _ in curves]
        for b, m in cps:
            if abs(abs(p(b)) - r) <= 1e-9 * (1 + r):
                _insert_vertex(curves, keep, b, m + 1)
        level_fams.append(curves)
        level_keep.append(keep)

    dir_fams, dir_keep = [], []
    args = list(cells.critical_arguments)
    for j, u in enumerate(args):
        prev = args[j - 1] - (TWO_PI if j == 0 else 0.0)
        u_off = u - CRITICAL_OFFSET * (u - prev)
        tr = trace_direction_set(p, u_off, rts, cv, policy)
        curves = [_trim_strand(p, s.points, u_off, cfg.beta) for s in tr.strands]
        keep = [[] for _ in curves]
        for b, m in cps:
            if abs(normalize_angle(float(np.angle(p(b)))) - u) <= 1e-8:
                _insert_vertex(curves, keep, b, m + 1)
        dir_fams.append(curves)
        dir_keep.append(keep)

    return DrawingTraces(rts, np.array([b for b, _ in cps]), circles, level_fams, level_keep, dir_fams,
                         dir_keep, list(cells.critical_heights), args)


def _require(traces: DrawingTraces | None, levels: bool = True, directions: bool = True) -> DrawingTraces:
    if traces is None or not traces.root_circles:
        raise MissingTraces("drawing traces are missing")
    if levels and not traces.level_families:
        raise MissingTraces("critical level traces are missing")
    if directions and not traces.direction_families:
        raise MissingTraces("critical direction traces are missing")
    return traces


def _draw_levels(cnv: _Canvas, traces: DrawingTraces, cfg: RenderConfig) -> None:
    n = len(traces.level_families)
    for i, (fam, keep) in enumerate(zip(traces.level_families, traces.level_keep)):
        for c, k in zip(fam, keep):
            pts = to_disk(resample(c, cfg.samples_per_curve, closed=True, keep=k))
            cnv.polyline(pts, f"level-{i}", _grey(i, n), closed=True, width=1.5,
                         title=f"critical level {traces.heights[i]:.6f}" if traces.heights else None)


def _draw_points(cnv: _Canvas, traces: DrawingTraces) -> None:
    for j, a in enumerate(traces.roots):
        cnv.dot(to_disk(a), "root", "#000000", f"root {j + 1}: {_complex_label(complex(a))}")
    for j, b in enumerate(traces.critical_points):
        cnv.dot(to_disk(b), "critical-point", "#555555", f"critical point {j + 1}: {_complex_label(complex(b))}")


def render_branched_annulus(traces: DrawingTraces | None, cfg: RenderConfig) -> str:
    cfg.validate()
    traces = _require(traces)
    cnv = _Canvas(cfg.canvas_size)
    cnv.circle(0j, 1.0, "boundary", "#000000", title="circle at infinity")
    for j, c in enumerate(traces.root_circles):
        pts = to_disk(resample(c, cfg.samples_per_curve, closed=True))
        cnv.polyline(pts, "root-circle", "#000000", closed=True,
                     title=f"root circle {j + 1}")
    for j, (fam, keep) in enumerate(zip(traces.direction_families, traces.direction_keep)):
        color = cfg.palette[j % len(cfg.palette)]
        for c, k in zip(fam, keep):
            pts = to_disk(resample(c, cfg.samples_per_curve, keep=k))
            cnv.polyline(pts, f"direction-{j}", color, width=1.5,
                         title=f"critical direction {traces.arguments[j]:.6f}" if traces.arguments else None)
    _draw_levels(cnv, traces, cfg)
    _draw_points(cnv, traces)
    return cnv.document()


def render_cacti(traces: DrawingTraces | None, cfg: RenderConfig) -> str:
    """Critical level sets alone: one cactus family per critical height."""
    cfg.validate()
    traces = _require(traces, directions=False)
    cnv = _Canvas(cfg.canvas_size)
    cnv.circle(0j, 1.0, "boundary", "#000000", title="circle at infinity")
    _draw_levels(cnv, traces, cfg)
    _draw_points(cnv, traces)
    return cnv.document()
