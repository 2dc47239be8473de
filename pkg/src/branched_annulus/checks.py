"""Invariant checks run after fitting.

Each check re-derives an identity the pipeline promises and reports
pass, fail or skipped with a short detail string.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .annulus import circular_distance
from .combinatorics import (
    Partition,
    check_real_noncrossing,
    cycle_type,
    is_noncrossing,
    nontrivial_cycles,
    shift_cycle,
)
from .errors import BranchedAnnulusError
from .monodromy import expected_orbit_sizes, is_transitive


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def euler_counts(d: int, k: int, ell: int, total_multiplicity: int) -> tuple[int, int, int]:
    """Vertices, edges and faces of the branched annulus cell structure."""
    return d * k * (ell + 2) - total_multiplicity, d * k * (2 * ell + 3), d * k * (ell + 1)


def _run(name: str, fn: Callable[[], tuple[bool | None, str]]) -> CheckResult:
    try:
        ok, detail = fn()
    except BranchedAnnulusError as exc:
        return CheckResult(name, "fail", f"{type(exc).__name__}: {exc}")
    if ok is None:
        return CheckResult(name, "skipped", detail)
    return CheckResult(name, "pass" if ok else "fail", detail)


def run_checks(est) -> list[CheckResult]:
    p = est.polynomial_
    d = p.degree
    crit = est.critical_data_
    cells = est.cells_
    mults = crit.critical_points.multiplicities
    fact = est.factorization_
    chain = est.partition_chain_

    def distinct():
        r = est.distinctness_
        return r.ok, f"min separation {r.min_root_separation:.6g}, min |critical value| {r.min_critical_value_modulus:.6g}"

    def multiplicity_sum():
        return sum(mults) == d - 1, f"sum {sum(mults)}, d-1 = {d - 1}"

    def cell_counts():
        k, ell = cells.k, cells.ell
        ok = cells.counts == (k * (ell + 2), k * (2 * ell + 3), k * (ell + 1)) and 1 <= k and 1 <= ell
        return ok, f"k={k}, ell={ell}, counts={cells.counts}"

    def euler():
        V, E, F = euler_counts(d, cells.k, cells.ell, sum(mults))
        valences = sorted(4 * (m + 1) for m in mults)
        return V - E + F == 1 - d, f"V={V}, E={E}, F={F}, chi={V - E + F}, critical valences {valences}"

    def covering():
        for t in est.level_traces_:
            for i, comp in enumerate(t.components):
                if comp.covering_degree != len(t.enclosed_roots(i)):
                    return False, f"height {t.height:.6f}: cycle length {comp.covering_degree} vs enclosed roots"
        return True, f"{sum(len(t.components) for t in est.level_traces_)} components"

    def chain_monotone():
        ps = chain.partitions
        ok = (len(ps) == cells.ell + 1 and ps[0].is_discrete and ps[-1].is_trivial
              and all(a < b for a, b in zip(ps, ps[1:])))
        return ok, str(chain)

    def merge():
        if est.merge_chain_ is None:
            return None, est.descent_status_ if est.descents_ is None else "disabled"
        return est.merge_chain_.partitions == chain.partitions, str(est.merge_chain_)

    def chain_noncrossing():
        for part in chain.partitions:
            for order in est.cyclic_orders_:
                if not is_noncrossing(part, order):
                    return False, f"{part} crosses sector {order.sector}"
        return True, f"{len(chain)} partitions x {len(est.cyclic_orders_)} orders"

    def product():
        return fact.product == shift_cycle(d), f"{fact.formatted()}"

    def sector_ranks():
        for sigma, cr in zip(fact.sector_permutations, fact.crossings):
            u = cells.critical_arguments[cr.critical_index]
            rank = sum(len(c) - 1 for c in nontrivial_cycles(sigma))
            mult = sum(m for b, m in crit.critical_points.entries
                       if circular_distance(float(np.angle(p(b))), u) <= 1e-8)
            if rank != mult:
                return False, f"argument {u:.6f}: rank {rank} vs multiplicity {mult}"
        return True, ""

    def rncp():
        check_real_noncrossing(est.real_noncrossing_partition_, p, crit)
        return True, f"{len(est.real_noncrossing_partition_.entries)} entries"

    def cactus():
        if est.cacti_ is None:
            return None, est.descent_status_
        for c in est.cacti_:
            if c.total_degree != d:
                return False, f"height {c.height:.6f}: degrees sum to {c.total_degree}"
            for comp in c.components:
                for v in comp.branch_vertices:
                    if len(v.cycles) != v.multiplicity + 1:
                        return False, f"branch vertex {v.critical_point} in {len(v.cycles)} cycles"
        return True, f"{len(est.cacti_)} critical heights"

    def banyan():
        if est.banyans_ is None:
            return None, est.descent_status_
        r = est.real_noncrossing_partition_
        for b in est.banyans_:
            if b.label_partition(d) != r.partition_at(b.argument):
                return False, f"argument {b.argument:.6f}: banyan labels differ from partition entry"
        return True, f"{len(est.banyans_)} critical arguments"

    def mono_types():
        m = est.monodromy_
        if m is None:
            return None, "disabled"
        for c, g in zip(m.critical_values, m.generators):
            sizes = sorted(len(x) for x in nontrivial_cycles(g))
            if sizes != expected_orbit_sizes(p, c, crit):
                return False, f"generator for {c}: orbit sizes {sizes}"
        return True, f"{len(m.generators)} generators"

    def mono_transitive():
        m = est.monodromy_
        if m is None:
            return None, "disabled"
        return is_transitive(m.generators, d), ""

    def mono_product():
        m = est.monodromy_
        if m is None:
            return None, "disabled"
        return m.product_cycle_type == (d,), f"cycle type {m.product_cycle_type}"

    def mono_infinity():
        m = est.monodromy_
        if m is None:
            return None, "disabled"
        inf = est.infinity_monodromy_
        return cycle_type(inf) == (d,) and inf == m.product, "product of generators equals the large-circle loop"

    checks = [
        ("distinct_roots", distinct),
        ("critical_multiplicity_sum", multiplicity_sum),
        ("cell_counts", cell_counts),
        ("euler_characteristic", euler),
        ("covering_degree", covering),
        ("chain_monotone", chain_monotone),
        ("chain_merge_oracle", merge),
        ("chain_noncrossing", chain_noncrossing),
        ("factorization_product", product),
        ("sector_permutation_ranks", sector_ranks),
        ("real_noncrossing_partition", rncp),
        ("cactus_structure", cactus),
        ("banyan_structure", banyan),
        ("monodromy_cycle_types", mono_types),
        ("monodromy_transitive", mono_transitive),
        ("monodromy_product_d_cycle", mono_product),
        ("monodromy_infinity_loop", mono_infinity),
    ]
    return [_run(name, fn) for name, fn in checks]


def step_halving_check(est) -> CheckResult:
    """Refit at half the step sizes and compare every combinatorial output."""
    try:
        other = est.halved().fit(est.polynomial_)
    except BranchedAnnulusError as exc:
        return CheckResult("step_halving", "fail", f"{type(exc).__name__}: {exc}")
    a, b = est.summary(), other.summary()
    diff = sorted(k for k in a if a[k] != b.get(k))
    return CheckResult("step_halving", "fail" if diff else "pass", ", ".join(diff) or "identical")
