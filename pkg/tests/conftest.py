import math
import time
from math import comb

import numpy as np
import pytest

from branched_annulus import BranchedAnnulus
from branched_annulus.poly import critical_data, find_roots, polynomial_from_coefficients, validate_distinct_roots
from frozen_values import RUNNING_COEFFS, RUNNING_ROOTS

CORPUS_SEED = 20261016
CORPUS_SIZE = 50
FAMILY_SEED = 7
FAMILY_TRIALS = 20


def family_coefficients(a: complex, b: complex, c: complex, d: int) -> list[complex]:
    """Ascending coefficients of a (z - b)^d + c."""
    out = [a * comb(d, j) * (-b) ** (d - j) for j in range(d + 1)]
    out[0] += c
    return out


def family_cases():
    rng = np.random.default_rng(FAMILY_SEED)
    cases = []
    for d in range(2, 8):
        for _ in range(FAMILY_TRIALS):
            a, b, c = (complex(*rng.normal(size=2)) for _ in range(3))
            cases.append((a, b, c, d))
    return cases


def _well_separated(coeffs) -> bool:
    p = polynomial_from_coefficients(coeffs)
    roots, crit = find_roots(p), critical_data(p)
    if not validate_distinct_roots(p, 1e-4, 1e-4, roots, crit).ok:
        return False
    cv = crit.critical_values.values
    scale = float(np.max(np.abs(cv)))
    if float(np.min(np.abs(cv))) < 1e-3 * scale:
        return False
    # coincident heights or arguments are fine; nearly coincident ones are not
    mod_gaps = np.diff(np.sort(np.abs(cv))) / scale
    args = np.sort(np.mod(np.angle(cv), 2 * math.pi))
    arg_gaps = np.diff(np.append(args, args[0] + 2 * math.pi))
    gaps = np.concatenate([mod_gaps, arg_gaps])
    return bool(np.all((gaps < 1e-9) | (gaps > 1e-4)))


def make_corpus(seed: int = CORPUS_SEED, n: int = CORPUS_SIZE) -> list[np.ndarray]:
    """Random polynomials of degree 4..8 with standard complex normal coefficients,
    rejecting near-degenerate root or critical-value configurations."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        d = int(rng.integers(4, 9))
        coeffs = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
        if _well_separated(coeffs):
            out.append(coeffs)
    return out


@pytest.fixture(scope="session")
def running():
    return BranchedAnnulus().fit(RUNNING_COEFFS)


@pytest.fixture(scope="session")
def letter_of(running):
    """Canonical root id -> letter index 1..5 (a1..a5 in frozen_values.py)."""
    roots = running.roots_.flat()
    return {i: int(np.argmin([abs(z - r) for r in RUNNING_ROOTS])) + 1 for i, z in enumerate(roots)}


@pytest.fixture(scope="session")
def corpus():
    return make_corpus()


@pytest.fixture(scope="session")
def corpus_fits(corpus):
    start = time.perf_counter()
    fits = [BranchedAnnulus().fit(c) for c in corpus]
    return fits, time.perf_counter() - start


# -- acceptance summary --------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA[n] = ("PASS" if report.passed else "FAIL", item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, name = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status} ({name})")
