"""Combinatorial invariants read off level and direction traces.

Roots are labelled by canonical ids 0..d-1. Permutations are tuples in
one-line notation: ``perm[i]`` is the image of ``i``.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .annulus import TWO_PI, AnnulusComplex, circular_distance, normalize_angle
from .errors import (
    ChainNotMonotone,
    CompatibilityViolation,
    LabelMismatch,
    ProductNotDCycle,
    WindingInconsistent,
)
from .lifting import (
    DEFAULT_POLICY,
    DirectionTrace,
    LevelTrace,
    StepPolicy,
    cycles_of,
    descend_from_critical_point,
    trace_direction_set,
    trace_level_set,
)
from .poly import CriticalData, Polynomial, critical_data, find_roots

Perm = tuple[int, ...]


# -- permutations ---------------------------------------------------------------

def identity(d: int) -> Perm:
    return tuple(range(d))


def compose(a: Perm, b: Perm) -> Perm:
    """``a o b``: apply b first."""
    return tuple(a[i] for i in b)


def compose_all(perms: Sequence[Perm]) -> Perm:
    """``perms[0] o perms[1] o ... o perms[-1]``; the last one acts first."""
    out = perms[-1]
    for q in reversed(perms[:-1]):
        out = compose(q, out)
    return out


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def cycle_type(a: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles_of(a)), reverse=True))


def is_full_cycle(a: Perm) -> bool:
    return cycle_type(a) == (len(a),)


def shift_cycle(d: int) -> Perm:
    """The d-cycle i -> i+1, written (1 2 ... d) on 1-based labels."""
    return tuple((i + 1) % d for i in range(d))


def from_cycles(cycles: Iterable[Sequence[int]], d: int, one_based: bool = True) -> Perm:
    out = list(range(d))
    off = 1 if one_based else 0
    for cyc in cycles:
        cyc = [c - off for c in cyc]
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            out[x] = y
    return tuple(out)


def nontrivial_cycles(a: Perm) -> list[tuple[int, ...]]:
    return [c for c in cycles_of(a) if len(c) > 1]


def format_cycles(a: Perm, labels: Sequence[str] | None = None) -> str:
    """Cycle notation, 1-based unless ``labels`` are given; identity is ``()``."""
    name = (lambda i: str(i + 1)) if labels is None else (lambda i: labels[i])
    cyc = nontrivial_cycles(a)
    if not cyc:
        return "()"
    return "".join("(" + ",".join(name(i) for i in c) + ")" for c in cyc)


# -- partitions -----------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Set partition of {0, ..., n-1}; blocks sorted, ordered by least element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        bl = [tuple(sorted(int(x) for x in b)) for b in blocks]
        if any(len(b) == 0 for b in bl):
            raise LabelMismatch("empty block")
        flat = sorted(x for b in bl for x in b)
        n = len(flat) if n is None else n
        if flat != list(range(n)):
            raise LabelMismatch("blocks are not a partition of the labels")
        return cls(tuple(sorted(bl)))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls((tuple(range(n)),))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def is_discrete(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    @property
    def is_trivial(self) -> bool:
        return len(self.blocks) == 1

    @property
    def nontrivial_blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b for b in self.blocks if len(b) > 1)

    @property
    def rank(self) -> int:
        return sum(len(b) - 1 for b in self.blocks)

    def block_of(self, i: int) -> tuple[int, ...]:
        for b in self.blocks:
            if i in b:
                return b
        raise LabelMismatch(f"label {i} not in partition")

    def refines(self, other: "Partition") -> bool:
        return all(set(b) <= set(other.block_of(b[0])) for b in self.blocks)

    def __le__(self, other):
        return self.refines(other)

    def __lt__(self, other):
        return self.refines(other) and self != other

    def relabel(self, labels: Sequence) -> list[set]:
        return [{labels[i] for i in b} for b in self.blocks]

    def __str__(self):
        if self.is_discrete:
            return "Discrete"
        if self.is_trivial:
            return "Trivial"
        return "{" + ",".join("{" + ",".join(str(i + 1) for i in b) + "}" for b in self.blocks) + "}"


@dataclass(frozen=True)
class PartitionChain:
    partitions: tuple[Partition, ...]
    heights: tuple[float, ...] = ()

    def __post_init__(self):
        ps = self.partitions
        if not ps[0].is_discrete or not ps[-1].is_trivial:
            raise ChainNotMonotone("chain must run from discrete to trivial")
        for a, b in zip(ps, ps[1:]):
            if not a < b:
                raise ChainNotMonotone(f"{a} is not strictly finer than {b}")

    def __len__(self):
        return len(self.partitions)

    def __iter__(self):
        return iter(self.partitions)

    def __str__(self):
        return " < ".join(str(x) for x in self.partitions)


def partition_from_level(trace: LevelTrace) -> Partition:
    table = trace.winding_table
    d = table.shape[1]
    if not np.all((table == 0) | (table == 1)) or not np.all(table.sum(axis=0) == 1):
        raise WindingInconsistent(f"winding table at height {trace.height} is not a 0/1 partition matrix")
    blocks = []
    for i, comp in enumerate(trace.components):
        enclosed = trace.enclosed_roots(i)
        if len(enclosed) != comp.covering_degree:
            raise WindingInconsistent(
                f"component of covering degree {comp.covering_degree} encloses {len(enclosed)} roots")
        blocks.append(enclosed)
    return Partition.from_blocks(blocks, d)


def level_traces(p: Polynomial, cells: AnnulusComplex, policy: StepPolicy = DEFAULT_POLICY,
                 roots=None, crit: CriticalData | None = None) -> list[LevelTrace]:
    roots = find_roots(p).flat() if roots is None else roots
    crit = critical_data(p) if crit is None else crit
    return [trace_level_set(p, h, roots, crit.critical_values, policy) for h in cells.regular_heights]


def chain_from_traces(traces: Sequence[LevelTrace]) -> PartitionChain:
    return PartitionChain(tuple(partition_from_level(t) for t in traces), tuple(t.height for t in traces))


def partition_chain(p: Polynomial, cells: AnnulusComplex, policy: StepPolicy = DEFAULT_POLICY) -> PartitionChain:
    return chain_from_traces(level_traces(p, cells, policy))


def descents(p: Polynomial, crit: CriticalData, roots, policy: StepPolicy = DEFAULT_POLICY) -> list[tuple[int, ...]]:
    """Root ids reached by the descending branches of each critical point, in critical-point order."""
    cv = crit.critical_values.values
    return [tuple(descend_from_critical_point(p, b, m, roots, cv, policy))
            for b, m in crit.critical_points.entries]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def partition(self) -> Partition:
        groups: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return Partition.from_blocks(groups.values(), len(self.parent))


def merge_chain_oracle(p: Polynomial, cells: AnnulusComplex, policy: StepPolicy = DEFAULT_POLICY,
                       roots=None, crit: CriticalData | None = None,
                       descent_roots: Sequence[tuple[int, ...]] | None = None) -> PartitionChain:
    """Partition chain from growing sublevel sets, merging roots along descents."""
    roots = find_roots(p).flat() if roots is None else roots
    crit = critical_data(p) if crit is None else crit
    if descent_roots is None:
        descent_roots = descents(p, crit, roots, policy)
    d = p.degree
    uf = _UnionFind(d)
    heights = [cells.height_index(_height(p(b))) for b, _ in crit.critical_points.entries]
    snaps = [uf.partition()]
    for h in range(cells.ell):
        for i, hi in enumerate(heights):
            if hi == h:
                ids = descent_roots[i]
                for a in ids[1:]:
                    uf.union(ids[0], a)
        snaps.append(uf.partition())
    return PartitionChain(tuple(snaps), cells.regular_heights)


def _height(w: complex) -> float:
    r2 = abs(w) ** 2
    return (r2 - 1) / (r2 + 1)


# -- orders -----------------------------------------------------------------------

@dataclass(frozen=True)
class CyclicOrder:
    sequence: tuple[int, ...]  # canonical rotation, smallest id first
    sector: int | None = None

    @classmethod
    def from_sequence(cls, seq: Sequence[int], sector: int | None = None) -> "CyclicOrder":
        seq = tuple(int(x) for x in seq)
        i = seq.index(min(seq))
        return cls(seq[i:] + seq[:i], sector)

    def same_cycle(self, other: "CyclicOrder") -> bool:
        return self.sequence == other.sequence

    def relabel(self, labels: Sequence) -> tuple:
        return tuple(labels[i] for i in self.sequence)


def cyclic_order_from_direction(trace: DirectionTrace, sector: int | None = None) -> CyclicOrder:
    return CyclicOrder.from_sequence(trace.roots_by_infinity_index(), sector)


def _gap_index(sorted_angles: list[float], x: float) -> int:
    return bisect.bisect_left(sorted_angles, x) % len(sorted_angles)


def interleaved(a: Sequence[float], b: Sequence[float]) -> bool:
    """Do two disjoint point sets on the circle (given by positions) interleave?"""
    if len(a) < 2 or len(b) < 2:
        return False
    sa = sorted(a)
    gaps = {_gap_index(sa, x) for x in b}
    return len(gaps) > 1


def is_noncrossing(partition, order: Sequence[int] | CyclicOrder) -> bool:
    seq = order.sequence if isinstance(order, CyclicOrder) else tuple(order)
    blocks = partition.blocks if isinstance(partition, Partition) else [tuple(b) for b in partition]
    flat = sorted(x for b in blocks for x in b)
    if flat != sorted(seq) or len(set(seq)) != len(seq):
        raise LabelMismatch("partition labels differ from the cyclic order")
    pos = {x: i for i, x in enumerate(seq)}
    placed = [[pos[x] for x in b] for b in blocks]
    return not any(interleaved(placed[i], placed[j])
                   for i in range(len(placed)) for j in range(i + 1, len(placed)))


def sector_permutation(prev: Sequence[int], nxt: Sequence[int]) -> Perm:
    """Position permutation with ``prev[sigma(i)] = nxt[i]``."""
    if len(prev) != len(nxt) or sorted(prev) != sorted(nxt) or len(set(prev)) != len(prev):
        raise LabelMismatch("linear orders are not on the same labels")
    where = {x: i for i, x in enumerate(prev)}
    return tuple(where[x] for x in nxt)


# -- sectors ----------------------------------------------------------------------

@dataclass
class SectorTrace:
    sector: int  # index into cells.regular_arguments
    argument: float  # unwrapped so arguments increase along the traversal
    trace: DirectionTrace

    @property
    def linear_order(self) -> tuple[int, ...]:
        return self.trace.roots_by_infinity_index()


def base_sector(cells: AnnulusComplex) -> int:
    """Sector whose midpoint argument is smallest in [0, 2pi)."""
    return int(np.argmin([normalize_angle(u) for u in cells.regular_arguments]))


def sector_traversal(cells: AnnulusComplex) -> list[tuple[int, float]]:
    """(sector, unwrapped midpoint) counterclockwise from the base sector."""
    b = base_sector(cells)
    v0 = normalize_angle(cells.regular_arguments[b])
    out = []
    for i in range(cells.k):
        j = (b + i) % cells.k
        out.append((j, v0 + normalize_angle(cells.regular_arguments[j] - v0)))
    return out


def direction_traces(p: Polynomial, cells: AnnulusComplex, policy: StepPolicy = DEFAULT_POLICY,
                     roots=None, crit: CriticalData | None = None) -> list[SectorTrace]:
    roots = find_roots(p).flat() if roots is None else roots
    crit = critical_data(p) if crit is None else crit
    return [SectorTrace(j, v, trace_direction_set(p, v, roots, crit.critical_values, policy))
            for j, v in sector_traversal(cells)]


@dataclass(frozen=True)
class Crossing:
    """Passage from one sector to the next across a critical argument."""

    critical_index: int  # index into cells.critical_arguments
    argument: float  # unwrapped, between the two sector midpoints
    label_shift: int  # infinity label = position + label_shift (mod d) at the normalized argument


@dataclass(frozen=True)
class Factorization:
    sector_permutations: tuple[Perm, ...]
    base_sector: int
    product: Perm
    linear_orders: tuple[tuple[int, ...], ...]  # one per sector plus the rotated base order
    crossings: tuple[Crossing, ...]

    def formatted(self) -> list[str]:
        return [format_cycles(s) for s in self.sector_permutations]


def _crossings(cells: AnnulusComplex, sectors: Sequence[SectorTrace]) -> list[Crossing]:
    out = []
    k = len(sectors)
    for i in range(k):
        lo = sectors[i].argument
        # sector j is bounded below by critical argument j
        j = sectors[(i + 1) % k].sector
        U = lo + normalize_angle(cells.critical_arguments[j] - lo)
        shift = int(round((U - cells.critical_arguments[j]) / TWO_PI))
        out.append(Crossing(j, U, shift))
    return out


def factorization(cells: AnnulusComplex, sectors: Sequence[SectorTrace]) -> Factorization:
    orders = [s.linear_order for s in sectors]
    base = orders[0]
    orders.append(base[1:] + base[:1])
    perms = tuple(sector_permutation(a, b) for a, b in zip(orders, orders[1:]))
    product = compose_all(perms)
    d = len(base)
    if product != shift_cycle(d):
        raise ProductNotDCycle(f"product {format_cycles(product)} is not (1 2 ... {d})")
    return Factorization(perms, sectors[0].sector, product, tuple(orders), tuple(_crossings(cells, sectors)))


@dataclass(frozen=True)
class RealNoncrossingPartition:
    """Noncrossing partition of the d infinity labels at each critical argument.

    Label m at argument u sits at angle (u - arg(leading) + 2 pi m) / d.
    Every other argument carries the discrete partition.
    """

    d: int
    arguments: tuple[float, ...]
    entries: tuple[Partition, ...]
    leading_argument: float = 0.0

    def partition_at(self, u: float) -> Partition:
        for v, part in zip(self.arguments, self.entries):
            if circular_distance(u, v) <= 1e-8:
                return part
        return Partition.discrete(self.d)

    def angle(self, u: float, m: int) -> float:
        return normalize_angle((u - self.leading_argument + TWO_PI * m) / self.d)


def real_noncrossing_partition(p: Polynomial, cells: AnnulusComplex, fact: Factorization,
                               crit: CriticalData | None = None) -> RealNoncrossingPartition:
    crit = critical_data(p) if crit is None else crit
    d = p.degree
    lead = float(np.angle(p.leading_coefficient))
    entries: dict[int, Partition] = {}
    for sigma, cr in zip(fact.sector_permutations, fact.crossings):
        blocks = [[(pos + cr.label_shift) % d for pos in cyc] for cyc in cycles_of(sigma)]
        entries[cr.critical_index] = Partition.from_blocks(blocks, d)
    order = sorted(entries)
    rncp = RealNoncrossingPartition(d, tuple(cells.critical_arguments[j] for j in order),
                                    tuple(entries[j] for j in order), lead)
    check_real_noncrossing(rncp, p, crit)
    return rncp


def check_real_noncrossing(rncp: RealNoncrossingPartition, p: Polynomial, crit: CriticalData) -> None:
    d = rncp.d
    placed = []
    for u, part in zip(rncp.arguments, rncp.entries):
        if not is_noncrossing(part, tuple(range(d))):
            raise CompatibilityViolation(f"entry at argument {u:.6f} is crossing")
        mult = 0
        npts = 0
        for b, m in crit.critical_points.entries:
            if circular_distance(float(np.angle(p(b))), u) <= 1e-8:
                mult += m
                npts += 1
        if part.rank != mult:
            raise CompatibilityViolation(
                f"entry at argument {u:.6f} has rank {part.rank}, critical multiplicity {mult}")
        if not 1 <= len(part.nontrivial_blocks) <= npts:
            raise CompatibilityViolation(f"entry at argument {u:.6f} has too many nontrivial blocks")
        for blk in part.nontrivial_blocks:
            placed.append([rncp.angle(u, m) for m in blk])
    for i in range(len(placed)):
        for j in range(i + 1, len(placed)):
            if interleaved(placed[i], placed[j]):
                raise CompatibilityViolation("blocks at different arguments interleave")


# -- cacti and banyans -----------------------------------------------------------

@dataclass(frozen=True)
class BranchVertex:
    critical_point: int  # index into critical_data.critical_points
    multiplicity: int
    cycles: tuple[int, ...]  # indices into the component's cycles

    @property
    def valence(self) -> int:
        return 2 * (self.multiplicity + 1)


@dataclass(frozen=True)
class CactusCycle:
    roots: tuple[int, ...]

    @property
    def covering_degree(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class CactusComponent:
    roots: tuple[int, ...]
    cycles: tuple[CactusCycle, ...]
    branch_vertices: tuple[BranchVertex, ...]


@dataclass(frozen=True)
class CactusStructure:
    height: float
    modulus: float
    components: tuple[CactusComponent, ...]

    @property
    def total_degree(self) -> int:
        return sum(c.covering_degree for comp in self.components for c in comp.cycles)


def cactus_structure(height_index: int, cells: AnnulusComplex, below: Partition, above: Partition,
                     crit: CriticalData, descent_roots: Sequence[tuple[int, ...]], p: Polynomial) -> CactusStructure:
    """Critical level set at critical height ``height_index``.

    Cycles are the components just below; components are the blocks just above.
    """
    t = cells.critical_heights[height_index]
    here = [i for i, (b, _) in enumerate(crit.critical_points.entries)
            if cells.height_index(_height(p(b))) == height_index]
    comps = []
    for blk in above.blocks:
        cycles = [c for c in below.blocks if set(c) <= set(blk)]
        verts = []
        for i in here:
            ids = descent_roots[i]
            if not set(ids) <= set(blk):
                continue
            touched = sorted({next(n for n, c in enumerate(cycles) if r in c) for r in ids})
            m = crit.critical_points.entries[i][1]
            if len(touched) != m + 1:
                raise CompatibilityViolation(f"branch vertex of multiplicity {m} meets {len(touched)} cycles")
            verts.append(BranchVertex(i, m, tuple(touched)))
        comps.append(CactusComponent(blk, tuple(CactusCycle(c) for c in cycles), tuple(verts)))
    out = CactusStructure(t, float(math.sqrt((1 + t) / (1 - t))), tuple(comps))
    if out.total_degree != p.degree:
        raise CompatibilityViolation("cactus cycle degrees do not sum to d")
    return out


def cacti(p: Polynomial, cells: AnnulusComplex, chain: PartitionChain, crit: CriticalData,
          descent_roots: Sequence[tuple[int, ...]]) -> list[CactusStructure]:
    ps = chain.partitions
    return [cactus_structure(i, cells, ps[i], ps[i + 1], crit, descent_roots, p) for i in range(cells.ell)]


@dataclass(frozen=True)
class BanyanComponent:
    infinity_labels: tuple[int, ...]
    roots: tuple[int, ...]
    interior_vertices: tuple[int, ...]  # critical point indices

    @property
    def leaves(self) -> int:
        return len(self.infinity_labels) + len(self.roots)


@dataclass(frozen=True)
class BanyanStructure:
    argument: float
    components: tuple[BanyanComponent, ...]
    valences: tuple[tuple[int, int], ...]  # (critical point index, valence)

    def label_partition(self, d: int) -> Partition:
        return Partition.from_blocks([c.infinity_labels for c in self.components], d)


def banyan_structure(crossing: Crossing, sigma: Perm, prev_order: Sequence[int], p: Polynomial,
                     cells: AnnulusComplex, crit: CriticalData,
                     descent_roots: Sequence[tuple[int, ...]]) -> BanyanStructure:
    d = p.degree
    u = cells.critical_arguments[crossing.critical_index]
    here = [i for i, (b, _) in enumerate(crit.critical_points.entries)
            if circular_distance(float(np.angle(p(b))), u) <= 1e-8]
    comps = []
    assigned = set()
    for orbit in cycles_of(sigma):
        labels = tuple(sorted((pos + crossing.label_shift) % d for pos in orbit))
        rts = tuple(sorted(prev_order[pos] for pos in orbit))
        inner = tuple(i for i in here if set(descent_roots[i]) <= set(rts))
        assigned.update(inner)
        comps.append(BanyanComponent(labels, rts, inner))
    if len(assigned) != len(here) or sum(len(c.interior_vertices) for c in comps) != len(here):
        raise CompatibilityViolation(f"critical points at argument {u:.6f} do not match banyan components")
    comps.sort(key=lambda c: c.infinity_labels)
    val = tuple((i, 2 * (crit.critical_points.entries[i][1] + 1)) for i in here)
    return BanyanStructure(u, tuple(comps), val)


def banyans(p: Polynomial, cells: AnnulusComplex, fact: Factorization, crit: CriticalData,
            descent_roots: Sequence[tuple[int, ...]]) -> list[BanyanStructure]:
    out = [banyan_structure(cr, s, fact.linear_orders[i], p, cells, crit, descent_roots)
           for i, (cr, s) in enumerate(zip(fact.crossings, fact.sector_permutations))]
    out.sort(key=lambda b: b.argument)
    return out
