"""Estimator-style front end: ``fit`` runs the whole pipeline on one polynomial."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin, clone
from sklearn.utils.validation import check_is_fitted

from ._validation import check_coefficients, check_points
from .annulus import build_cell_structure, height_of_modulus, normalize_angle
from .combinatorics import (
    banyans,
    cacti,
    chain_from_traces,
    cyclic_order_from_direction,
    descents,
    direction_traces,
    factorization,
    level_traces,
    merge_chain_oracle,
    real_noncrossing_partition,
)
from .errors import DescentStalled, RepeatedRootsError, ZeroInput
from .lifting import DEFAULT_POLICY
from .monodromy import infinity_monodromy, monodromy_representation
from .poly import TOL_CV, TOL_SEP, critical_data, find_roots, validate_distinct_roots


class BranchedAnnulus(TransformerMixin, BaseEstimator):
    """Combinatorial invariants of a complex polynomial with distinct roots.

    ``fit`` takes ascending coefficients (complex numbers or [re, im] pairs)
    or a ``Polynomial``. ``transform`` sends points of the plane to
    (argument, height) coordinates on the vertical annulus through p.
    """

    def __init__(self, tol_sep: float = TOL_SEP, tol_cv: float = TOL_CV, step_scale: float = 1.0,
                 monodromy: bool = True, merge_oracle: bool = True):
        self.tol_sep = tol_sep
        self.tol_cv = tol_cv
        self.step_scale = step_scale
        self.monodromy = monodromy
        self.merge_oracle = merge_oracle

    @property
    def policy_(self):
        return DEFAULT_POLICY.scaled(self.step_scale)

    def fit(self, X, y=None):
        from .checks import run_checks

        p = check_coefficients(X)
        policy = DEFAULT_POLICY.scaled(self.step_scale)
        roots = find_roots(p)
        crit = critical_data(p)
        report = validate_distinct_roots(p, self.tol_sep, self.tol_cv, roots, crit)
        if not report.ok:
            raise RepeatedRootsError(
                f"distinct roots required (min separation {report.min_root_separation:.3e}, "
                f"min critical value modulus {report.min_critical_value_modulus:.3e})")
        rts = roots.flat()
        self.polynomial_ = p
        self.roots_ = roots
        self.critical_data_ = crit
        self.distinctness_ = report
        self.cells_ = build_cell_structure(crit.critical_values)

        self.level_traces_ = level_traces(p, self.cells_, policy, rts, crit)
        self.partition_chain_ = chain_from_traces(self.level_traces_)
        self.direction_traces_ = direction_traces(p, self.cells_, policy, rts, crit)
        self.cyclic_orders_ = [cyclic_order_from_direction(s.trace, s.sector) for s in self.direction_traces_]
        self.factorization_ = factorization(self.cells_, self.direction_traces_)
        self.real_noncrossing_partition_ = real_noncrossing_partition(p, self.cells_, self.factorization_, crit)

        self.descent_status_ = "ok"
        try:
            self.descents_ = descents(p, crit, rts, policy)
        except DescentStalled as exc:
            self.descents_ = None
            self.descent_status_ = f"skipped: {exc}"
        if self.descents_ is not None:
            self.merge_chain_ = (merge_chain_oracle(p, self.cells_, policy, rts, crit, self.descents_)
                                 if self.merge_oracle else None)
            self.cacti_ = cacti(p, self.cells_, self.partition_chain_, crit, self.descents_)
            self.banyans_ = banyans(p, self.cells_, self.factorization_, crit, self.descents_)
        else:
            self.merge_chain_ = None
            self.cacti_ = None
            self.banyans_ = None

        if self.monodromy:
            self.monodromy_ = monodromy_representation(p, policy, rts, crit)
            self.infinity_monodromy_ = infinity_monodromy(p, rts, crit.critical_values, policy)
        else:
            self.monodromy_ = None
            self.infinity_monodromy_ = None
        self.checks_ = run_checks(self)
        return self

    def transform(self, X):
        """(argument, height) on the vertical annulus of p(z) for each point z."""
        check_is_fitted(self, "polynomial_")
        w = self.polynomial_(check_points(X))
        if np.any(w == 0):
            raise ZeroInput("a point maps to 0, which has no annulus image")
        return np.column_stack([normalize_angle(np.angle(w)), height_of_modulus(np.abs(w))])

    def summary(self) -> dict:
        """Combinatorial outputs only; equal across runs at different step sizes."""
        check_is_fitted(self, "polynomial_")
        out = {
            "chain": [p.blocks for p in self.partition_chain_],
            "cyclic_orders": [(c.sector, c.sequence) for c in self.cyclic_orders_],
            "linear_orders": list(self.factorization_.linear_orders),
            "sector_permutations": list(self.factorization_.sector_permutations),
            "real_noncrossing_partition": [e.blocks for e in self.real_noncrossing_partition_.entries],
            "covering_degrees": [[c.covering_degree for c in t.components] for t in self.level_traces_],
            "descents": self.descents_,
        }
        if self.monodromy_ is not None:
            out["monodromy"] = list(self.monodromy_.generators)
            out["infinity_monodromy"] = self.infinity_monodromy_
        return out

    def halved(self) -> "BranchedAnnulus":
        """Unfitted copy with half the continuation step sizes."""
        return clone(self).set_params(step_scale=self.step_scale / 2)

    @property
    def passed(self) -> bool:
        check_is_fitted(self, "checks_")
        return all(c.status != "fail" for c in self.checks_)
