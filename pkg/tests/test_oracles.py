"""The frozen reference values are what the independent oracles produce."""
import pytest

import oracles_freeze as ofz
from frozen_values import (
    RUNNING_DESCENTS,
    RUNNING_HEIGHTS,
    RUNNING_INFINITY_LOOP,
    RUNNING_LIFT_ENDPOINT,
    RUNNING_MONODROMY,
    RUNNING_ROOTS,
    Z2_LEVEL_PERMUTATION,
)


@pytest.fixture(scope="module")
def roots():
    return ofz.letter_roots()


def test_roots(roots):
    assert all(abs(a - b) < 1e-14 for a, b in zip(roots, RUNNING_ROOTS))


def test_heights():
    assert ofz.heights() == pytest.approx(RUNNING_HEIGHTS, abs=1e-15)


def test_descents(roots):
    for b, want in RUNNING_DESCENTS.items():
        assert ofz.descent(b, roots) == want


def test_lift_endpoint():
    assert abs(ofz.lift_endpoint() - RUNNING_LIFT_ENDPOINT) < 1e-12


def test_z2_levels():
    for t, want in Z2_LEVEL_PERMUTATION.items():
        assert ofz.z2_level_permutation(t) == want


def test_lassos(roots):
    for c, want in RUNNING_MONODROMY.items():
        assert ofz.lasso_permutation(c, roots) == want
    assert ofz.infinity_loop_permutation(roots) == RUNNING_INFINITY_LOOP
