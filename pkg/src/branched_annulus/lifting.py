"""Path lifting through a polynomial.

Given a path ``w(t)`` in the range avoiding critical values, continue the
solutions of ``p(z) = w(t)`` with an Euler predictor and Newton corrector.
All strands of one lift share a parameter grid: a step is accepted only
when every strand converges and no two strands collapse onto each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .annulus import TWO_PI, modulus_of_height
from .errors import (
    DescentStalled,
    EndpointMatchAmbiguous,
    InfinityIndexUnstable,
    NoConvergence,
    PathTooCloseToCriticalValue,
    PointTooCloseToCurve,
    StepUnderflow,
)
from .poly import EPS, Polynomial, evaluation_scale, find_roots, horner, horner2


# -- paths -------------------------------------------------------------------

class Path:
    """A path ``w: [0, 1] -> C`` with a velocity."""

    def point(self, t: float) -> complex:
        raise NotImplementedError

    def velocity(self, t: float) -> complex:
        raise NotImplementedError

    def breakpoints(self) -> list[float]:
        return [0.0, 1.0]

    def sample(self, n: int = 512) -> np.ndarray:
        ts = np.unique(np.concatenate([np.linspace(0, 1, n), self.breakpoints()]))
        return np.array([self.point(t) for t in ts])


@dataclass(frozen=True)
class SegmentPath(Path):
    start: complex
    end: complex

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start


@dataclass(frozen=True)
class ArcPath(Path):
    """Circle arc ``center + radius * e^{i theta}``, theta from theta0 to theta1."""

    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t):
        th = self.theta0 + t * (self.theta1 - self.theta0)
        return self.center + self.radius * complex(math.cos(th), math.sin(th))

    def velocity(self, t):
        th = self.theta0 + t * (self.theta1 - self.theta0)
        return 1j * self.radius * (self.theta1 - self.theta0) * complex(math.cos(th), math.sin(th))


@dataclass(frozen=True)
class RayPath(Path):
    """Radial path at fixed argument, modulus varying geometrically from s0 to s1."""

    argument: float
    s0: float
    s1: float

    def modulus(self, t):
        return self.s0 * (self.s1 / self.s0) ** t

    def point(self, t):
        return self.modulus(t) * complex(math.cos(self.argument), math.sin(self.argument))

    def velocity(self, t):
        return math.log(self.s1 / self.s0) * self.point(t)


@dataclass(frozen=True)
class PiecewisePath(Path):
    """Concatenation of paths, each given an equal share of [0, 1]."""

    pieces: tuple[Path, ...]

    def _locate(self, t):
        n = len(self.pieces)
        i = min(int(t * n), n - 1)
        return i, t * n - i

    def point(self, t):
        i, s = self._locate(t)
        return self.pieces[i].point(s)

    def velocity(self, t):
        i, s = self._locate(t)
        return len(self.pieces) * self.pieces[i].velocity(s)

    def breakpoints(self):
        n = len(self.pieces)
        return [i / n for i in range(n + 1)]


@dataclass(frozen=True)
class FunctionPath(Path):
    """Wrap a plain callable; velocity by central differences if not given."""

    func: Callable[[float], complex]
    dfunc: Callable[[float], complex] | None = None

    def point(self, t):
        return complex(self.func(t))

    def velocity(self, t):
        if self.dfunc is not None:
            return complex(self.dfunc(t))
        h = 1e-6
        a, b = max(t - h, 0.0), min(t + h, 1.0)
        return (self.point(b) - self.point(a)) / (b - a)


# -- tracking ----------------------------------------------------------------

@dataclass(frozen=True)
class StepPolicy:
    max_step: float = 1 / 64
    initial_step: float = 1 / 64
    # step bound: |dw| <= safety_fraction * distance(w, critical values)
    safety_fraction: float = 0.25
    max_newton: int = 5
    grow_after: int = 8
    min_step: float = 1e-10
    residual_tol: float = 1e-12

    def halved(self) -> "StepPolicy":
        return replace(self, max_step=self.max_step / 2, initial_step=self.initial_step / 2,
                       safety_fraction=self.safety_fraction / 2)

    def scaled(self, factor: float) -> "StepPolicy":
        return replace(self, max_step=self.max_step * factor,
                       initial_step=self.initial_step * factor,
                       safety_fraction=self.safety_fraction * factor)


DEFAULT_POLICY = StepPolicy()


@dataclass(frozen=True)
class Anchor:
    kind: str  # "root" | "infinity" | "critical" | "free"
    index: int | None = None


FREE = Anchor("free")


@dataclass
class TracedStrand:
    params: np.ndarray
    points: np.ndarray
    start_anchor: Anchor = FREE
    end_anchor: Anchor = FREE

    @property
    def start(self) -> complex:
        return complex(self.points[0])

    @property
    def end(self) -> complex:
        return complex(self.points[-1])


def _newton_tol(coeffs, z, w, policy):
    return policy.residual_tol * (1 + abs(w)) + 64 * EPS * evaluation_scale(coeffs, z)


def _correct(coeffs, z, w, policy, iterations=None):
    """Newton on p(z) = w for all strands; returns (converged, z)."""
    iterations = policy.max_newton if iterations is None else iterations
    for _ in range(iterations + 1):
        p, dp = horner2(coeffs, z)
        r = p - w
        if np.all(np.abs(r) <= _newton_tol(coeffs, z, w, policy)):
            return True, z
        if _ == iterations or np.any(dp == 0):
            break
        z = z - r / dp
    return False, z


def _pairwise_min(z):
    if len(z) < 2:
        return math.inf
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    return diff


def lift_paths(p: Polynomial, path: Path, z0: Sequence[complex], policy: StepPolicy = DEFAULT_POLICY,
               avoid: np.ndarray | None = None, margin: float = 0.0) -> list[TracedStrand]:
    """Continue every start point in ``z0`` along ``path``.

    ``avoid`` holds the critical values; the path must stay at least
    ``margin`` away from them and step sizes shrink near them.
    """
    coeffs = p.coeffs
    avoid = np.zeros(0, dtype=complex) if avoid is None else np.asarray(avoid, dtype=complex)
    if margin > 0 and avoid.size:
        pts = path.sample()
        if np.min(np.abs(pts[:, None] - avoid[None, :])) < margin:
            raise PathTooCloseToCriticalValue("path passes within the safety margin of a critical value")
    z = np.array(z0, dtype=complex)
    ok, z = _correct(coeffs, z, path.point(0.0), policy, iterations=8)
    if not ok:
        raise NoConvergence("start points do not lie over the path start")
    if isinstance(path, PiecewisePath):
        # lift piece by piece so velocity jumps never enter a predictor step
        n = len(path.pieces)
        all_t, all_z = [np.zeros(1)], [z[None, :]]
        for i, piece in enumerate(path.pieces):
            t_i, z_i = _track(coeffs, piece, all_z[-1][-1], policy, avoid)
            all_t.append((i + t_i[1:]) / n)
            all_z.append(z_i[1:])
        params, points = np.concatenate(all_t), np.concatenate(all_z)
    else:
        params, points = _track(coeffs, path, z, policy, avoid)
    return [TracedStrand(params, points[:, i].copy()) for i in range(points.shape[1])]


def _track(coeffs, path, z, policy, avoid):
    ts, zs = [0.0], [z.copy()]
    t, h, streak = 0.0, policy.initial_step, 0
    prev_sep = _pairwise_min(z)
    while t < 1.0:
        h_try = min(h, 1.0 - t)
        w_t, v_t = path.point(t), path.velocity(t)
        speed = abs(v_t)
        if avoid.size and speed > 0:
            dist = float(np.min(np.abs(avoid - w_t)))
            h_try = min(h_try, policy.safety_fraction * dist / speed)
        if h_try < policy.min_step:
            raise StepUnderflow(f"step {h_try:.3e} below minimum at t={t:.6f}")
        t1 = t + h_try
        if 1.0 - t1 < 1e-12:
            t1 = 1.0
        _, dp = horner2(coeffs, z)
        dz = v_t * (t1 - t) / dp
        z_pred = z + dz
        ok, z_new = _correct(coeffs, z_pred, path.point(t1), policy)
        if ok:
            drift = np.abs(z_new - z_pred)
            ok = bool(np.all(drift <= np.abs(dz) + 1e-12 * (1 + np.abs(z))))
        if ok and len(z) > 1:
            sep = _pairwise_min(z_new)
            ok = bool(np.all(sep >= 0.1 * prev_sep))
        if not ok:
            h = h_try / 2
            streak = 0
            continue
        z, t = z_new, t1
        if len(z) > 1:
            prev_sep = _pairwise_min(z)
        ts.append(t)
        zs.append(z.copy())
        streak += 1
        if streak >= policy.grow_after:
            h = min(2 * h, policy.max_step)
            streak = 0
    return np.array(ts), np.array(zs)


def lift_path(p: Polynomial, w: Path, z0: complex, policy: StepPolicy = DEFAULT_POLICY,
              avoid: np.ndarray | None = None, margin: float = 0.0) -> TracedStrand:
    return lift_paths(p, w, [z0], policy, avoid, margin)[0]


def match_points(ends: np.ndarray, starts: np.ndarray, factor: float = 0.45) -> list[int]:
    """Index of the unique start within ``factor`` x (min start separation) of each end."""
    starts = np.asarray(starts)
    sep = float(np.min(_pairwise_min(starts))) if len(starts) > 1 else math.inf
    radius = factor * sep
    out = []
    for e in ends:
        dist = np.abs(starts - e)
        j = int(np.argmin(dist))
        if not dist[j] <= radius:
            raise EndpointMatchAmbiguous(f"endpoint {e} is {dist[j]:.3e} from nearest start (radius {radius:.3e})")
        out.append(j)
    if len(set(out)) != len(out):
        raise EndpointMatchAmbiguous("endpoint matching is not injective")
    return out


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of a permutation in one-line notation, each starting at its least element."""
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append(tuple(cyc))
    return out


def winding_number(curve: np.ndarray, z: complex) -> int:
    """Winding number of a closed sampled curve around ``z``."""
    curve = np.asarray(curve, dtype=complex)
    if curve[0] != curve[-1]:
        curve = np.append(curve, curve[0])
    v = curve - z
    resolution = float(np.max(np.abs(np.diff(curve))))
    if float(np.min(np.abs(v))) < 0.5 * resolution:
        raise PointTooCloseToCurve(f"point {z} within sampling resolution of the curve")
    total = float(np.sum(np.angle(v[1:] / v[:-1])))
    return int(round(total / TWO_PI))


# -- level sets ----------------------------------------------------------------

@dataclass
class LevelComponent:
    cycle: tuple[int, ...]
    curve: np.ndarray

    @property
    def covering_degree(self) -> int:
        return len(self.cycle)


@dataclass
class LevelTrace:
    radius: float
    height: float
    strands: list[TracedStrand]
    permutation: tuple[int, ...]
    components: list[LevelComponent]
    winding_table: np.ndarray  # components x roots

    def enclosed_roots(self, i: int) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.winding_table[i] == 1))


def _critical_values_array(cvl) -> np.ndarray:
    if cvl is None:
        return np.zeros(0, dtype=complex)
    return np.asarray(cvl.values if hasattr(cvl, "values") else cvl, dtype=complex)


def _roots_array(roots) -> np.ndarray:
    return np.asarray(roots.values if hasattr(roots, "values") else roots, dtype=complex)


def fiber(p: Polynomial, w: complex) -> np.ndarray:
    """The d solutions of p(z) = w in canonical order (distinct for regular w)."""
    return find_roots(p.shifted(w)).flat()


def trace_level_set(p: Polynomial, t_height: float, roots, cvl, policy: StepPolicy = DEFAULT_POLICY) -> LevelTrace:
    r = float(modulus_of_height(t_height))
    cv = _critical_values_array(cvl)
    if cv.size and np.min(np.abs(np.abs(cv) - r)) <= 1e-6 * (1 + r):
        raise PathTooCloseToCriticalValue(f"height {t_height} is not regular")
    starts = fiber(p, r)
    strands = lift_paths(p, ArcPath(0j, r, 0.0, TWO_PI), starts, policy, avoid=cv)
    perm = tuple(match_points(np.array([s.end for s in strands]), starts))
    rts = _roots_array(roots)
    components = []
    for cyc in cycles_of(perm):
        pieces = [strands[cyc[0]].points]
        for i in cyc[1:]:
            pieces.append(strands[i].points[1:])
        curve = np.concatenate(pieces)
        components.append(LevelComponent(cyc, curve))
    table = np.array([[winding_number(c.curve, a) for a in rts] for c in components], dtype=int)
    return LevelTrace(r, float(t_height), strands, perm, components, table)


# -- direction sets --------------------------------------------------------------

@dataclass
class DirectionTrace:
    argument: float
    strands: list[TracedStrand]
    root_of: tuple[int, ...]
    infinity_index_of: tuple[int, ...]

    def roots_by_infinity_index(self) -> tuple[int, ...]:
        order = [0] * len(self.root_of)
        for s, m in enumerate(self.infinity_index_of):
            order[m] = self.root_of[s]
        return tuple(order)


def strand_start_modulus(p: Polynomial, roots) -> float:
    rts = _roots_array(roots)
    _, dp = horner2(p.coeffs, rts)
    sep = float(np.min(_pairwise_min(rts)))
    return 1e-3 * float(np.min(np.abs(dp))) * sep


def root_strands(p: Polynomial, roots, u: float, s_end: float, cvl=None,
                 policy: StepPolicy = DEFAULT_POLICY) -> list[TracedStrand]:
    """One strand per root over the ray at argument ``u``, from near the root to modulus ``s_end``."""
    rts = _roots_array(roots)
    s_min = strand_start_modulus(p, rts)
    _, dp = horner2(p.coeffs, rts)
    e = complex(math.cos(u), math.sin(u))
    z0 = rts + s_min * e / dp
    strands = lift_paths(p, RayPath(u, s_min, s_end), z0, policy, avoid=_critical_values_array(cvl))
    for j, s in enumerate(strands):
        s.start_anchor = Anchor("root", j)
    return strands


def root_fiber(p: Polynomial, roots, w: complex, cvl=None, policy: StepPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Preimages of a small ``w`` labelled by root: entry j lies on root j's sheet.

    ``|w|`` must be below every critical-value modulus.
    """
    strands = root_strands(p, roots, float(np.angle(w)), abs(w), cvl, policy)
    return np.array([s.end for s in strands])


def infinity_index(p: Polynomial, roots, z: complex, u: float) -> float:
    """Real-valued index of the asymptotic direction of ``z``; integral when p(z) has argument u."""
    rts = _roots_array(roots)
    d = p.degree
    corr = float(np.sum(np.angle(1 - rts / z)))
    return (d * math.atan2(z.imag, z.real) + float(np.angle(p.leading_coefficient)) + corr - u) / TWO_PI


def trace_direction_set(p: Polynomial, u: float, roots, cvl=None,
                        policy: StepPolicy = DEFAULT_POLICY) -> DirectionTrace:
    rts = _roots_array(roots)
    d = p.degree
    big = float(np.max(np.abs(rts)))
    R = 10 * big + 10
    s_max = abs(p.leading_coefficient) * (R + big) ** d
    strands = root_strands(p, rts, u, s_max, cvl, policy)
    idx = []
    for s in strands:
        last = [infinity_index(p, rts, complex(z), u) for z in s.points[-2:]]
        rounded = [int(round(x)) % d for x in last]
        if rounded[0] != rounded[1] or abs(last[-1] - round(last[-1])) > 0.25:
            raise InfinityIndexUnstable(f"infinity index unstable: {last}")
        idx.append(rounded[-1])
        s.end_anchor = Anchor("infinity", rounded[-1])
    if sorted(idx) != list(range(d)):
        raise InfinityIndexUnstable(f"infinity indices {idx} are not a bijection")
    return DirectionTrace(float(u), strands, tuple(range(d)), tuple(idx))


# -- descent from critical points ----------------------------------------------

def safety_margin(cvl) -> float:
    """0.25 x min distance between distinct critical values and from them to 0."""
    cv = _critical_values_array(cvl)
    m = float(np.min(np.abs(cv)))
    if cv.size > 1:
        m = min(m, float(np.min(_pairwise_min(cv))))
    return 0.25 * m


STALL_ANGLE_TOL = 1e-6


def _ray_blocked(c: complex, others: np.ndarray) -> bool:
    """Does another critical value sit on the segment from 0 to c?"""
    e = c / abs(c)
    for c2 in others:
        rel = c2 * e.conjugate()
        if 0 < rel.real < abs(c) and abs(rel.imag) <= STALL_ANGLE_TOL * rel.real:
            return True
    return False


def descent_start_points(p: Polynomial, b: complex, m: int, delta: float) -> tuple[np.ndarray, complex]:
    """Points near ``b`` over ``(|c| - delta) e^{i arg c}`` in the m+1 descending directions."""
    c = p(b)
    C = complex(horner(p.derivative_coeffs(m + 1), b)) / math.factorial(m + 1)
    w = (abs(c) - delta) * c / abs(c)
    base = (w - c) / C
    rho = abs(base) ** (1.0 / (m + 1))
    phi = math.atan2(base.imag, base.real)
    z0 = b + rho * np.exp(1j * (phi + TWO_PI * np.arange(m + 1)) / (m + 1))
    return z0, w


def descend_from_critical_point(p: Polynomial, b: complex, m: int, roots, cvl,
                                policy: StepPolicy = DEFAULT_POLICY) -> list[int]:
    """Root ids reached by the m+1 steepest-descent branches of |p| leaving ``b``."""
    cv = _critical_values_array(cvl)
    rts = _roots_array(roots)
    c = p(b)
    others = np.array([v for v in cv if abs(v - c) > 1e-9 * (1 + abs(c))])
    if _ray_blocked(c, others):
        raise DescentStalled(f"another critical value lies on the descent ray of {c}")
    z0, w_start = descent_start_points(p, b, m, 1e-6 * abs(c))
    s_end = 0.5 * float(np.min(np.abs(cv)))
    u = math.atan2(c.imag, c.real)
    strands = lift_paths(p, RayPath(u, abs(w_start), s_end), z0, policy, avoid=cv)
    ref = root_fiber(p, rts, s_end * c / abs(c), cv, policy)
    return match_points(np.array([s.end for s in strands]), ref)
