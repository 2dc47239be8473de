"""Complex polynomials, their roots, critical points and critical values.

Coefficients are always stored in ascending order ``c_0, ..., c_d``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeTooSmall, NoConvergence, ZeroLeadingCoefficient

EPS = np.finfo(float).eps

ABERTH_MAX_ITER = 500
RESIDUAL_TOL = 1e-12
CLUSTER_TOL = 1e-7
MULTIPLICITY_TEST_TOL = 1e-11
TOL_SEP = 1e-9
TOL_CV = 1e-9


def horner(coeffs: np.ndarray, z):
    """Evaluate an ascending coefficient array at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def horner2(coeffs: np.ndarray, z):
    """Return ``(p(z), p'(z))`` in one pass."""
    z = np.asarray(z, dtype=complex)
    p = np.full(z.shape, coeffs[-1], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for c in coeffs[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def derivative_coefficients(coeffs: np.ndarray, order: int = 1) -> np.ndarray:
    out = np.asarray(coeffs, dtype=complex)
    for _ in range(order):
        out = out[1:] * np.arange(1, len(out))
    return out


def evaluation_scale(coeffs: np.ndarray, z):
    """``sum |c_k| |z|^k``: the magnitude against which roundoff is measured."""
    return horner(np.abs(coeffs).astype(complex), np.abs(np.asarray(z))).real


@dataclass(frozen=True)
class ComplexMultiset:
    """Distinct complex values with positive integer multiplicities."""

    entries: tuple[tuple[complex, int], ...]

    @classmethod
    def from_values(cls, values: Iterable[complex]) -> "ComplexMultiset":
        return cls(tuple((complex(v), 1) for v in values))

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.entries], dtype=complex)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    @property
    def size(self) -> int:
        return sum(self.multiplicities)

    def flat(self) -> np.ndarray:
        """All values repeated by multiplicity."""
        return np.array([v for v, m in self.entries for _ in range(m)], dtype=complex)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class Polynomial:
    coefficients: tuple[complex, ...]
    _coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = np.array(self.coefficients, dtype=complex)
        if arr.size == 0 or arr[-1] == 0:
            raise ZeroLeadingCoefficient("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in arr))
        object.__setattr__(self, "_coeffs", arr)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> complex:
        return self.coefficients[-1]

    def __call__(self, z):
        out = horner(self._coeffs, z)
        return complex(out) if np.ndim(z) == 0 else out

    def eval_with_derivative(self, z):
        return horner2(self._coeffs, z)

    def derivative_coeffs(self, order: int = 1) -> np.ndarray:
        return derivative_coefficients(self._coeffs, order)

    def shifted(self, w: complex) -> np.ndarray:
        """Coefficients of ``p(z) - w``."""
        out = self._coeffs.copy()
        out[0] -= w
        return out


def polynomial_from_coefficients(coeffs: Sequence[complex]) -> Polynomial:
    """Build a polynomial from ascending coefficients.

    Trailing zeros are rejected rather than trimmed.
    """
    coeffs = [complex(c) for c in coeffs]
    if not coeffs or coeffs[-1] == 0:
        raise ZeroLeadingCoefficient("last coefficient is zero")
    if len(coeffs) < 3:
        raise DegreeTooSmall(f"degree {len(coeffs) - 1} < 2")
    return Polynomial(tuple(coeffs))


def polynomial_from_roots(leading: complex, roots) -> Polynomial:
    if leading == 0:
        raise ZeroLeadingCoefficient("leading coefficient must be nonzero")
    if isinstance(roots, ComplexMultiset):
        flat = roots.flat()
    else:
        flat = np.asarray(list(roots), dtype=complex)
    coeffs = np.array([complex(leading)], dtype=complex)
    for a in flat:
        # multiply by (z - a), ascending order
        coeffs = np.concatenate([[0], coeffs]) - a * np.concatenate([coeffs, [0]])
    return polynomial_from_coefficients(coeffs)


def evaluate(p: Polynomial, z):
    return p(z)


def residual_tolerance(coeffs: np.ndarray, z):
    """Acceptance bound for ``|p(z)|`` at a computed root ``z``."""
    d = len(coeffs) - 1
    z = np.asarray(z)
    base = RESIDUAL_TOL * (1 + np.abs(z) ** d * abs(coeffs[-1]))
    return np.maximum(base, 64 * EPS * evaluation_scale(coeffs, z))


def _aberth(coeffs: np.ndarray) -> np.ndarray:
    d = len(coeffs) - 1
    if d == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    monic = coeffs / coeffs[-1]
    center = -monic[d - 1] / d
    radius = max(abs(monic[k]) ** (1.0 / (d - k)) for k in range(d))
    if radius == 0:
        return np.zeros(d, dtype=complex)
    angles = 2 * np.pi * np.arange(d) / d + 0.4
    z = center + radius * np.exp(1j * angles)
    # iterates for a multiple root wander inside the rounding-noise ball, so keep the best seen
    best, best_score = z, math.inf
    for _ in range(ABERTH_MAX_ITER):
        p, dp = horner2(coeffs, z)
        score = float(np.max(np.abs(p) / residual_tolerance(coeffs, z)))
        if score < best_score:
            best, best_score = z, score
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / np.where(dp != 0, dp, 1), p / (EPS * (1 + abs(p))))
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= 4 * EPS * (1 + np.abs(z))):
            break
    residual = np.abs(horner(coeffs, z))
    if not np.all(residual <= residual_tolerance(coeffs, z)):
        z = best
        residual = np.abs(horner(coeffs, z))
    if not np.all(residual <= residual_tolerance(coeffs, z)):
        raise NoConvergence(f"Aberth iteration did not converge (max residual {residual.max():.3e})")
    return z


def _newton_polish(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    best, best_res = z, abs(complex(horner(coeffs, z)))
    for _ in range(steps):
        p, dp = horner2(coeffs, best)
        p, dp = complex(p), complex(dp)
        if dp == 0 or p == 0:
            break
        cand = best - p / dp
        res = abs(complex(horner(coeffs, cand)))
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def _refined_center(coeffs: np.ndarray, z: np.ndarray) -> complex:
    """Centroid of a cluster polished on the derivative where it is a simple root."""
    m = len(z)
    center = complex(np.mean(z))
    if m == 1:
        return _newton_polish(coeffs, center)
    return _newton_polish(derivative_coefficients(coeffs, m - 1), center, steps=8)


def _passes_multiplicity_test(coeffs: np.ndarray, center: complex, m: int) -> bool:
    # p, ..., p^(m-2) must also vanish at the refined centroid
    for j in range(m - 1):
        cj = derivative_coefficients(coeffs, j)
        scale = evaluation_scale(cj, center) + EPS
        if abs(complex(horner(cj, center))) > MULTIPLICITY_TEST_TOL * scale:
            return False
    return True


def _single_linkage(z: np.ndarray, threshold) -> list[list[int]]:
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= threshold(z[i], z[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def cluster_roots(coeffs: np.ndarray, z: np.ndarray) -> list[tuple[complex, int]]:
    """Group approximate roots into (value, multiplicity) pairs.

    Roots within the absolute cluster tolerance always merge. Beyond that,
    the coarsest single-linkage grouping whose every cluster passes the
    derivative test (p, ..., p^(m-2) vanish where p^(m-1) does) is used;
    this recovers multiple roots that Aberth only resolves to about
    ``eps**(1/m)``.
    """
    n = len(z)
    base = lambda a, b: CLUSTER_TOL * (1 + max(abs(a), abs(b)))
    best = _single_linkage(z, base)
    cap = 1e-2 * (1 + float(np.max(np.abs(z)))) if n else 0.0
    dists = sorted({abs(z[i] - z[j]) for i in range(n) for j in range(i + 1, n)})
    for tau in dists:
        if tau > cap:
            break
        groups = _single_linkage(z, lambda a, b, tau=tau: max(tau, base(a, b)))
        if len(groups) == len(best):
            continue
        if all(
            len(g) == 1 or _passes_multiplicity_test(coeffs, _refined_center(coeffs, z[g]), len(g))
            for g in groups
        ):
            best = groups
    return [(_refined_center(coeffs, z[g]), len(g)) for g in best]


def _canonical_key(tol: float):
    def cmp(a, b):
        va, vb = a[0], b[0]
        if abs(va.real - vb.real) > tol * (1 + abs(va) + abs(vb)):
            return -1 if va.real < vb.real else 1
        if va.imag != vb.imag:
            return -1 if va.imag < vb.imag else 1
        return 0

    return functools.cmp_to_key(cmp)


def sort_canonical(entries: list[tuple[complex, int]]) -> list[tuple[complex, int]]:
    """Sort lexicographically by (real, imag), treating near-equal real parts as equal."""
    return sorted(entries, key=_canonical_key(1e-9))


def find_roots(p) -> ComplexMultiset:
    """All roots of ``p`` with multiplicities, in canonical (real, imag) order."""
    coeffs = p.coeffs if isinstance(p, Polynomial) else np.asarray(p, dtype=complex)
    if len(coeffs) < 2 or coeffs[-1] == 0:
        raise DegreeTooSmall("find_roots needs degree >= 1 with nonzero leading coefficient")
    z = _aberth(coeffs)
    return ComplexMultiset(tuple(sort_canonical(cluster_roots(coeffs, z))))


@dataclass(frozen=True)
class CriticalData:
    critical_points: ComplexMultiset
    critical_values: ComplexMultiset
    # index into critical_points -> index into critical_values
    value_of: tuple[int, ...]

    def points_of_value(self, j: int) -> list[int]:
        return [i for i, v in enumerate(self.value_of) if v == j]


CRITICAL_VALUE_DEDUP = 1e-9


def critical_data(p: Polynomial) -> CriticalData:
    cpt = find_roots(p.derivative_coeffs())
    values: list[complex] = []
    mults: list[int] = []
    value_of = []
    for b, m in cpt:
        c = p(b)
        for j, v in enumerate(values):
            if abs(v - c) <= CRITICAL_VALUE_DEDUP * (1 + abs(c)):
                mults[j] += m
                value_of.append(j)
                break
        else:
            values.append(c)
            mults.append(m)
            value_of.append(len(values) - 1)
    return CriticalData(cpt, ComplexMultiset(tuple(zip(values, mults))), tuple(value_of))


@dataclass(frozen=True)
class DistinctnessReport:
    ok: bool
    min_root_separation: float
    min_critical_value_modulus: float


def validate_distinct_roots(p: Polynomial, tol_sep: float = TOL_SEP, tol_cv: float = TOL_CV,
                            roots: ComplexMultiset | None = None,
                            crit: CriticalData | None = None) -> DistinctnessReport:
    roots = find_roots(p) if roots is None else roots
    crit = critical_data(p) if crit is None else crit
    flat = roots.flat()
    sep = math.inf
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            sep = min(sep, abs(flat[i] - flat[j]))
    cv = float(np.min(np.abs(crit.critical_values.values))) if len(crit.critical_values) else math.inf
    return DistinctnessReport(bool(sep > tol_sep and cv > tol_cv), float(sep), cv)
