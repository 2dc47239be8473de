"""Acceptance criteria, one test each. Tolerances are fixed here and not tuned.

Letters a..e stand for the running example's roots a1..a5 (see frozen_values.py).
"""
import json
import math
import time

import numpy as np
import pytest

from branched_annulus import BranchedAnnulus
from branched_annulus.checks import euler_counts
from branched_annulus.cli import main
from branched_annulus.combinatorics import CyclicOrder, Partition, cycle_type, is_full_cycle, is_noncrossing
from branched_annulus.monodromy import monodromy_representation
from conftest import family_cases, family_coefficients
from frozen_values import RUNNING_COEFFS

ROOTS_TOL = 1e-3
CRITICAL_TOL = 1e-8
RUNNING_SECONDS = 5.0
FAMILY_SECONDS = 30.0
CORPUS_SECONDS = 300.0

LETTERS = "abcde"


def letter_blocks(part, letter_of):
    return sorted(sorted(letter_of[i] for i in b) for b in part.blocks)


@pytest.mark.criterion(1)
def test_criterion_1_running_example_end_to_end():
    start = time.perf_counter()
    est = BranchedAnnulus().fit(RUNNING_COEFFS)
    elapsed = time.perf_counter() - start
    roots = est.roots_.flat()
    for want in [0, 1.7944, 3.5972, -0.1958 + 1.5117j, -0.1958 - 1.5117j]:
        assert np.min(np.abs(roots - want)) < ROOTS_TOL
    pts = est.critical_data_.critical_points.flat()
    assert len(pts) == 4
    for want in [1, 3, 1j, -1j]:
        assert np.min(np.abs(pts - want)) < CRITICAL_TOL
    vals = est.critical_data_.critical_values.flat()
    assert len(vals) == 4
    for want in [0.46, -1.62, 0.3 + 0.56j, 0.3 - 0.56j]:
        assert np.min(np.abs(vals - want)) < CRITICAL_TOL
    assert est.passed
    assert elapsed < RUNNING_SECONDS, f"fit took {elapsed:.2f} s"


@pytest.mark.criterion(2)
def test_criterion_2_cell_structure(running):
    cells = running.cells_
    assert (cells.k, cells.ell, cells.counts) == (4, 3, (20, 36, 16))


@pytest.mark.criterion(3)
def test_criterion_3_partition_chain(running, letter_of):
    got = [letter_blocks(part, letter_of) for part in running.partition_chain_]
    assert got == [
        [[1], [2], [3], [4], [5]],
        [[1, 2], [3], [4], [5]],
        [[1, 2, 4, 5], [3]],
        [[1, 2, 3, 4, 5]],
    ]
    assert running.merge_chain_ is not None
    assert running.merge_chain_.partitions == running.partition_chain_.partitions


@pytest.mark.criterion(4)
def test_criterion_4_cyclic_orders(running, letter_of):
    want = {CyclicOrder.from_sequence([LETTERS.index(ch) for ch in w]).sequence
            for w in ["cadeb", "cdaeb", "bdaec", "bdeac"]}
    got = {CyclicOrder.from_sequence([letter_of[i] - 1 for i in c.sequence]).sequence
           for c in running.cyclic_orders_}
    assert len(running.cyclic_orders_) == 4
    assert got == want


@pytest.mark.criterion(5)
def test_criterion_5_factorization(running):
    fact = running.factorization_
    assert fact.formatted() == ["(2,3)", "(1,5)", "(3,4)", "(1,4)"]
    assert fact.product == (1, 2, 3, 4, 0)


@pytest.mark.criterion(6)
def test_criterion_6_monodromy(running, letter_of):
    rep = running.monodromy_
    crit = running.critical_data_
    g = rep.generator_for(0.46)
    moved = {i for i, j in enumerate(g) if i != j}
    assert {letter_of[i] for i in moved} == {1, 2}
    assert g[min(moved)] == max(moved) and g[max(moved)] == min(moved)
    # the same two roots are reached by descending from b = 1
    b1 = int(np.argmin(np.abs(crit.critical_points.flat() - 1)))
    assert set(running.descents_[b1]) == moved
    assert len(rep.generators) == 4
    args = [math.atan2(c.imag, c.real) % (2 * math.pi) for c in rep.critical_values]
    assert args == sorted(args)
    assert rep.product_cycle_type == (5,) and is_full_cycle(rep.product)
    assert rep.transitive


@pytest.mark.criterion(7)
def test_criterion_7_one_critical_value_family():
    start = time.perf_counter()
    for a, b, c, d in family_cases():
        est = BranchedAnnulus(monodromy=False, merge_oracle=False).fit(family_coefficients(a, b, c, d))
        chain = est.partition_chain_.partitions
        assert chain == (Partition.discrete(d), Partition.trivial(d))
        (sigma,) = est.factorization_.sector_permutations
        assert is_full_cycle(sigma)
        rep = monodromy_representation(est.polynomial_, est.policy_, est.roots_.flat(), est.critical_data_)
        (gen,) = rep.generators
        assert cycle_type(gen) == (d,) and rep.transitive
        below, above = est.level_traces_
        assert below.height < est.cells_.critical_heights[0] < above.height
        assert [len(comp.cycle) for comp in below.components] == [1] * d
        assert [len(comp.cycle) for comp in above.components] == [d]
    elapsed = time.perf_counter() - start
    assert elapsed < FAMILY_SECONDS, f"family took {elapsed:.1f} s"


@pytest.mark.criterion(8)
def test_criterion_8_random_corpus_properties(corpus_fits):
    fits, fit_seconds = corpus_fits
    assert len(fits) == 50
    assert {est.polynomial_.degree for est in fits} <= set(range(4, 9))
    start = time.perf_counter()
    for est in fits:
        d = est.polynomial_.degree
        cells = est.cells_
        # covering degree = number of enclosed roots, for every component of every level trace
        for tr in est.level_traces_:
            for i, comp in enumerate(tr.components):
                assert len(comp.cycle) == len(tr.enclosed_roots(i))
        chain = est.partition_chain_.partitions
        assert chain[0].is_discrete and chain[-1].is_trivial
        assert all(x < y for x, y in zip(chain, chain[1:]))
        for part in chain:
            for order in est.cyclic_orders_:
                assert is_noncrossing(part, order)
        assert sum(est.critical_data_.critical_points.multiplicities) == d - 1
        V, E, F = euler_counts(d, cells.k, cells.ell, d - 1)
        assert V - E + F == 1 - d
        assert {c.name: c.status for c in est.checks_}["euler_characteristic"] == "pass"
        halved = est.halved().fit(est.polynomial_)
        assert halved.summary() == est.summary()
    total = fit_seconds + time.perf_counter() - start
    assert total < CORPUS_SECONDS, f"corpus took {total:.1f} s"


@pytest.mark.criterion(9)
def test_criterion_9_byte_identical_reports(tmp_path):
    src = tmp_path / "running.json"
    src.write_text(json.dumps({"coefficients": [[c, 0] for c in RUNNING_COEFFS]}))
    outs = []
    for name in ("first.json", "second.json"):
        out = tmp_path / name
        assert main(["analyze", str(src), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
