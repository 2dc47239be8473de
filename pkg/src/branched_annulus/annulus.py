"""Coordinates on the vertical annulus and the disk, and the rectangular cell
structure induced by a finite set of points of the punctured plane."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCriticalValues, ZeroCriticalValue, ZeroInput

TWO_PI = 2 * math.pi
ARG_TOL = 1e-9
HEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class AnnulusPoint:
    argument: float  # in [0, 2pi)
    height: float  # in [-1, 1]


def normalize_angle(u):
    """Map angles into [0, 2pi)."""
    out = np.mod(u, TWO_PI)
    # mod can return 2pi for tiny negative inputs
    out = np.where(out >= TWO_PI, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


def circular_distance(u: float, v: float) -> float:
    x = abs(normalize_angle(u) - normalize_angle(v))
    return min(x, TWO_PI - x)


def height_of_modulus(r):
    r2 = np.square(r)
    return (r2 - 1) / (r2 + 1)


def modulus_of_height(t):
    return np.sqrt((1 + np.asarray(t)) / (1 - np.asarray(t)))


def to_annulus(z: complex) -> AnnulusPoint:
    if z == 0:
        raise ZeroInput("0 has no image on the annulus")
    return AnnulusPoint(normalize_angle(np.angle(z)), float(height_of_modulus(abs(z))))


def from_annulus(point: AnnulusPoint) -> complex:
    r = float(modulus_of_height(point.height))
    return complex(r * np.exp(1j * point.argument))


def to_disk(z):
    """Radial homeomorphism of the plane onto the open unit disk."""
    z = np.asarray(z, dtype=complex)
    out = z / np.sqrt(np.abs(z) ** 2 + 1)
    return complex(out) if out.ndim == 0 else out


def disk_radius_of_height(t):
    """Radius in the disk of the latitude circle at height ``t``."""
    return np.sqrt((1 + np.asarray(t)) / 2)


def enlarge_puncture(z, alpha: float, beta: float):
    """Push the punctured disk of radius ``alpha`` off a disk of radius ``beta``.

    Identity outside the disk of radius alpha; the limit at 0 becomes the
    circle of radius beta.
    """
    z = np.asarray(z, dtype=complex)
    eps = beta / alpha
    r = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = np.where(r > 0, z / np.where(r > 0, r, 1), 1.0)
    inside = r <= alpha
    out = np.where(inside, z + eps * (alpha * unit - z), z)
    return complex(out) if out.ndim == 0 else out


def annulus_to_disk(argument, height, alpha: float, beta: float):
    """Planar drawing of annulus points; height -1 lands on the radius-beta circle."""
    height = np.asarray(height, dtype=float)
    with np.errstate(divide="ignore"):
        r = np.where(height <= -1, 0.0, modulus_of_height(np.clip(height, -1, 1 - 1e-300)))
    s = r + (beta / alpha) * (alpha - r)
    r = np.where(r <= alpha, s, r)
    return to_disk(r * np.exp(1j * np.asarray(argument)))


@dataclass(frozen=True)
class AnnulusComplex:
    critical_arguments: tuple[float, ...]
    critical_heights: tuple[float, ...]
    regular_arguments: tuple[float, ...]
    regular_heights: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.critical_arguments)

    @property
    def ell(self) -> int:
        return len(self.critical_heights)

    @property
    def counts(self) -> tuple[int, int, int]:
        k, ell = self.k, self.ell
        return k * (ell + 2), k * (2 * ell + 3), k * (ell + 1)

    def sector_bounds(self, j: int) -> tuple[float, float]:
        """Sector ``j`` runs counterclockwise from critical argument ``j`` to ``j+1``.

        The upper bound of the last sector is unwrapped past 2pi.
        """
        lo = self.critical_arguments[j]
        hi = self.critical_arguments[(j + 1) % self.k]
        if j == self.k - 1:
            hi += TWO_PI
        return lo, hi

    def unwrapped_regular_argument(self, j: int) -> float:
        lo, hi = self.sector_bounds(j)
        return 0.5 * (lo + hi)

    def argument_index(self, u: float) -> int | None:
        for i, v in enumerate(self.critical_arguments):
            if circular_distance(u, v) <= ARG_TOL * 10:
                return i
        return None

    def height_index(self, t: float) -> int | None:
        for i, s in enumerate(self.critical_heights):
            if abs(t - s) <= HEIGHT_TOL * 10:
                return i
        return None


def _dedup_sorted(values, close) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if out and close(out[-1], v):
            continue
        out.append(v)
    return out


def build_cell_structure(cvl) -> AnnulusComplex:
    """Minimal rectangular cell structure containing the images of ``cvl``."""
    values = np.asarray(cvl.values if hasattr(cvl, "values") else list(cvl), dtype=complex)
    if values.size == 0:
        raise EmptyCriticalValues("no critical values")
    if np.any(values == 0):
        raise ZeroCriticalValue("0 is a critical value: roots are not distinct")
    args = _dedup_sorted(normalize_angle(np.angle(values)).tolist(),
                         lambda a, b: circular_distance(a, b) <= ARG_TOL)
    # merge a value just below 2pi into 0
    if len(args) > 1 and circular_distance(args[0], args[-1]) <= ARG_TOL:
        args.pop()
    heights = _dedup_sorted(height_of_modulus(np.abs(values)).tolist(),
                            lambda a, b: abs(a - b) <= HEIGHT_TOL)
    k = len(args)
    reg_args = []
    for j in range(k):
        lo = args[j]
        hi = args[(j + 1) % k] + (TWO_PI if j == k - 1 else 0.0)
        reg_args.append(normalize_angle(0.5 * (lo + hi)))
    ladder = [-1.0] + heights + [1.0]
    reg_heights = [0.5 * (a + b) for a, b in zip(ladder, ladder[1:])]
    return AnnulusComplex(tuple(args), tuple(heights), tuple(reg_args), tuple(reg_heights))
