"""JSON analysis report.

Complex numbers are [re, im] pairs. Root ids are 0-based indices into
``roots``; permutation cycle strings use 1-based labels.
"""
from __future__ import annotations

import json
import re

from .combinatorics import format_cycles

SCHEMA_VERSION = "1.0"


def _c(z) -> list[float]:
    z = complex(z)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def _f(x) -> float:
    return float(x) + 0.0


def _perm(perm) -> dict:
    return {"one_line": list(perm), "cycles": format_cycles(perm)}


def build_report(est) -> dict:
    p = est.polynomial_
    crit = est.critical_data_
    cells = est.cells_
    fact = est.factorization_
    rncp = est.real_noncrossing_partition_
    out = {
        "schema_version": SCHEMA_VERSION,
        "polynomial": {"coefficients": [_c(a) for a in p.coefficients], "degree": p.degree},
        "roots": [_c(a) for a in est.roots_.flat()],
        "critical_points": [{"point": _c(b), "multiplicity": int(m), "value": _c(p(b))}
                            for b, m in crit.critical_points.entries],
        "critical_values": [{"value": _c(c), "multiplicity": int(m)} for c, m in crit.critical_values.entries],
        "cells": {
            "k": cells.k,
            "ell": cells.ell,
            "counts": list(cells.counts),
            "critical_arguments": [_f(u) for u in cells.critical_arguments],
            "critical_heights": [_f(t) for t in cells.critical_heights],
            "regular_arguments": [_f(u) for u in cells.regular_arguments],
            "regular_heights": [_f(t) for t in cells.regular_heights],
        },
        "partition_chain": [[list(b) for b in part.blocks] for part in est.partition_chain_],
        "cyclic_orders": [{"sector": s.sector, "argument": _f(s.argument), "order": list(c.sequence),
                           "linear_order": list(s.linear_order)}
                          for s, c in zip(est.direction_traces_, est.cyclic_orders_)],
        "factorization": {
            "base_sector": fact.base_sector,
            "sector_permutations": [dict(_perm(s), critical_argument=_f(cells.critical_arguments[cr.critical_index]))
                                    for s, cr in zip(fact.sector_permutations, fact.crossings)],
            "product": _perm(fact.product),
        },
        "real_noncrossing_partition": [{"argument": _f(u), "blocks": [list(b) for b in part.blocks]}
                                       for u, part in zip(rncp.arguments, rncp.entries)],
    }
    if est.descents_ is not None:
        out["descents"] = [list(ids) for ids in est.descents_]
    if est.monodromy_ is not None:
        m = est.monodromy_
        out["monodromy"] = {
            "generators": [dict(_perm(g), critical_value=_c(c)) for c, g in zip(m.critical_values, m.generators)],
            "product": _perm(m.product),
            "product_cycle_type": list(m.product_cycle_type),
            "infinity_loop": _perm(est.infinity_monodromy_),
        }
    out["checks"] = [{"name": c.name, "status": c.status, "detail": c.detail} for c in est.checks_]
    out["status"] = "pass" if all(c.status != "fail" for c in est.checks_) else "fail"
    return out


def dumps(obj) -> str:
    """Deterministic serialization; floats use the shortest repr that round-trips."""
    text = json.dumps(obj, indent=2, allow_nan=False)
    # keep arrays of plain numbers on one line
    text = _NUMBER_ARRAY.sub(lambda m: "[" + ", ".join(m.group(1).split()).replace(",,", ",") + "]", text)
    return text + "\n"


_NUMBER_ARRAY = re.compile(r"\[((?:\s*-?[\d.eE+-]+,?)+)\s*\]")
