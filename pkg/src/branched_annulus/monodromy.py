"""Monodromy of the branched cover p: C -> C.

Each critical value c gets a lasso: out along the ray through c from a
small basepoint, once counterclockwise around c, and back. Fibers over
the small disk below every critical value are labelled by root ids, so
generators are permutations of root ids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .annulus import TWO_PI, normalize_angle
from .combinatorics import Perm, _UnionFind, compose, cycle_type, nontrivial_cycles
from .errors import CycleTypeMismatch, TransitivityFailure, UnroutablePath
from .lifting import (
    DEFAULT_POLICY,
    ArcPath,
    Path,
    PiecewisePath,
    SegmentPath,
    StepPolicy,
    lift_paths,
    match_points,
    root_fiber,
)
from .poly import CriticalData, Polynomial, critical_data, find_roots

LOOP_RADIUS_FRACTION = 0.25


def _local_gap(c: complex, cv: np.ndarray) -> float:
    others = [abs(c - v) for v in cv if abs(c - v) > 1e-12 * (1 + abs(c))]
    return min([abs(c)] + others)


def basepoint_modulus(cv: np.ndarray) -> float:
    return 0.5 * float(np.min(np.abs(cv)))


def _leg(u: float, s_from: float, s_to: float, c: complex, cv: np.ndarray) -> list[complex]:
    """Vertices of the outward radial leg at argument u, with box detours around nearby critical values."""
    e = complex(math.cos(u), math.sin(u))
    pts = [s_from * e]
    detours = []
    for v in cv:
        if abs(v - c) <= 1e-12 * (1 + abs(c)):
            continue
        x = (v * e.conjugate()).real
        y = (v * e.conjugate()).imag
        rho = LOOP_RADIUS_FRACTION * _local_gap(v, cv)
        if abs(y) < rho and s_from < x < s_to + rho:
            detours.append((x, y, rho, _ordered_before(v, c)))
    for x, y, rho, before in sorted(detours):
        # values earlier in generator order are passed on the counterclockwise side
        h = y + rho if before else y - rho
        pts += [(x - rho) * e, complex(x - rho, h) * e, complex(x + rho, h) * e, (x + rho) * e]
    pts.append(s_to * e)
    return pts


def loop_for_critical_value(c: complex, cvl) -> PiecewisePath:
    cv = np.asarray(cvl.values if hasattr(cvl, "values") else cvl, dtype=complex)
    u = math.atan2(c.imag, c.real)
    rho = LOOP_RADIUS_FRACTION * _local_gap(c, cv)
    s0 = basepoint_modulus(cv)
    verts = _leg(u, s0, abs(c) - rho, c, cv)
    out = [SegmentPath(a, b) for a, b in zip(verts, verts[1:])]
    circle = ArcPath(c, rho, u + math.pi, u + math.pi + TWO_PI)
    back = [SegmentPath(b, a) for a, b in reversed(list(zip(verts, verts[1:])))]
    path = PiecewisePath(tuple(out + [circle] + back))
    _check_clearance(path, cv)
    return path


def _check_clearance(path: Path, cv: np.ndarray) -> None:
    pts = path.sample(2048)
    for v in cv:
        need = 0.9 * LOOP_RADIUS_FRACTION * _local_gap(v, cv)
        if float(np.min(np.abs(pts - v))) < need:
            raise UnroutablePath(f"loop passes within {need:.3e} of critical value {v}")


def lift_loop(p: Polynomial, path: Path, roots, cv: np.ndarray, policy: StepPolicy = DEFAULT_POLICY) -> Perm:
    """Permutation of root ids from lifting a loop based in the small disk."""
    w0 = path.point(0.0)
    fib = root_fiber(p, roots, w0, cv, policy)
    strands = lift_paths(p, path, fib, policy, avoid=cv)
    return tuple(match_points(np.array([s.end for s in strands]), fib))


def monodromy_generator(p: Polynomial, c: complex, roots, cvl, policy: StepPolicy = DEFAULT_POLICY) -> Perm:
    cv = np.asarray(cvl.values if hasattr(cvl, "values") else cvl, dtype=complex)
    return lift_loop(p, loop_for_critical_value(c, cv), roots, cv, policy)


def infinity_loop_path(cv: np.ndarray) -> PiecewisePath:
    """Out from the small disk in a gap between critical arguments, once around everything, back."""
    args = sorted(normalize_angle(np.angle(cv)).tolist())
    # middle of the gap that contains argument 0
    theta = 0.5 * (args[-1] - TWO_PI + args[0])
    s0 = basepoint_modulus(cv)
    R = 2 * float(np.max(np.abs(cv))) + 1
    e = complex(math.cos(theta), math.sin(theta))
    return PiecewisePath((SegmentPath(s0 * e, R * e), ArcPath(0j, R, theta, theta + TWO_PI),
                          SegmentPath(R * e, s0 * e)))


def infinity_monodromy(p: Polynomial, roots, cvl, policy: StepPolicy = DEFAULT_POLICY) -> Perm:
    """Monodromy of a circle enclosing every critical value; a d-cycle."""
    cv = np.asarray(cvl.values if hasattr(cvl, "values") else cvl, dtype=complex)
    return lift_loop(p, infinity_loop_path(cv), roots, cv, policy)


@dataclass(frozen=True)
class MonodromyRep:
    critical_values: tuple[complex, ...]  # in generator order
    generators: tuple[Perm, ...]
    product: Perm  # last generator applied last
    product_cycle_type: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.product)

    def generator_for(self, c: complex) -> Perm:
        i = int(np.argmin([abs(c - v) for v in self.critical_values]))
        return self.generators[i]

    @property
    def transitive(self) -> bool:
        return is_transitive(self.generators, self.degree)


def _order_key(v: complex) -> tuple[float, float]:
    return round(normalize_angle(float(np.angle(v))), 9), abs(v)


def _ordered_before(a: complex, b: complex) -> bool:
    return _order_key(a) < _order_key(b)


def generator_order(cv) -> list[complex]:
    """Critical values by argument in [0, 2pi), then modulus."""
    return sorted(cv, key=_order_key)


def is_transitive(gens, d: int) -> bool:
    uf = _UnionFind(d)
    for g in gens:
        for i, j in enumerate(g):
            uf.union(i, j)
    return len(uf.partition().blocks) == 1


def expected_orbit_sizes(p: Polynomial, c: complex, crit: CriticalData) -> list[int]:
    return sorted(m + 1 for b, m in crit.critical_points.entries if abs(p(b) - c) <= 1e-8 * (1 + abs(c)))


def monodromy_representation(p: Polynomial, policy: StepPolicy = DEFAULT_POLICY, roots=None,
                             crit: CriticalData | None = None) -> MonodromyRep:
    roots = find_roots(p).flat() if roots is None else roots
    crit = critical_data(p) if crit is None else crit
    cv = np.asarray(crit.critical_values.values, dtype=complex)
    order = generator_order(cv)
    gens = tuple(monodromy_generator(p, c, roots, cv, policy) for c in order)
    for c, g in zip(order, gens):
        sizes = sorted(len(cyc) for cyc in nontrivial_cycles(g))
        if sizes != expected_orbit_sizes(p, c, crit):
            raise CycleTypeMismatch(f"generator for {c} has orbit sizes {sizes}")
    d = p.degree
    if not is_transitive(gens, d):
        raise TransitivityFailure("monodromy group is not transitive")
    prod = tuple(range(d))
    for g in gens:
        prod = compose(g, prod)
    return MonodromyRep(tuple(complex(c) for c in order), gens, prod, cycle_type(prod))
