"""Decompositions driven by quantities other than redundancy.

Each quantity comes with a parthood criterion saying which atoms it is
made of: restricted information (res), weak synergy (ws), moderate
synergy (ms), strong synergy (syn) and unique information (unq). The
forward direction sums atoms under the criterion; res, ws and ms can be
inverted back to unique atoms, syn cannot.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Callable, Iterable, Mapping

import numpy as np

from .atoms import AtomTable, moebius_invert, sum_where
from .lattice import (Lattice, Node, format_antichain, full_mask, maximal_elements,
                      minimal_elements)
from .probability import JointDistribution, conditional_mi, mutual_information

CRITERIA = ("res", "ws", "ms", "syn", "unq")


def _union(alpha) -> int:
    return reduce(lambda a, b: a | b, alpha, 0)


def c_res(f: Node, alpha) -> bool:
    """Every collection f is 1 on contains one of the alpha collections."""
    alpha = list(alpha)
    return all(any(b & a == a for a in alpha) for b in f.ones)


def c_ws(f: Node, alpha) -> bool:
    return all(f(a) == 0 for a in alpha)


def c_ms(f: Node, alpha) -> bool:
    return c_ws(f, alpha) and f(_union(alpha)) == 1


def c_syn(f: Node, alpha) -> bool:
    cols = list(dict.fromkeys(alpha))
    whole = _union(cols)
    if not c_ms(f, cols):
        return False
    for size in range(2, len(cols)):
        for sub in combinations(cols, size):
            u = _union(sub)
            if u != whole and f(u) == 1:
                return False
    return True


def c_unq(f: Node, alpha) -> bool:
    alpha = list(alpha)
    return all(f(b) == any(b & a == a for a in alpha) for b in range(1 << f.n))


PREDICATES: dict[str, Callable] = {
    "res": c_res, "ws": c_ws, "ms": c_ms, "syn": c_syn, "unq": c_unq,
}


def predicate(criterion: str) -> Callable:
    try:
        return PREDICATES[criterion]
    except KeyError:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}") from None


@dataclass
class LinearSystem:
    """0/1 coefficients, one row per antichain and one column per node."""
    criterion: str
    lattice: Lattice
    rows: list                     # antichains labelling the rows
    coefficients: np.ndarray       # int8, shape (len(rows), len(lattice))
    rhs: np.ndarray | None = None

    def row_labels(self) -> list[str]:
        return [format_antichain(a) for a in self.rows]

    def row(self, alpha) -> np.ndarray:
        return self.coefficients[self.rows.index(frozenset(alpha))]


def criterion_matrix(criterion: str, lattice: Lattice, rows: Iterable | None = None) -> LinearSystem:
    """Rows default to the antichains of all lattice nodes, in lattice order."""
    pred = predicate(criterion)
    rows = [x.antichain for x in lattice.nodes] if rows is None else [frozenset(r) for r in rows]
    coef = np.zeros((len(rows), len(lattice)), dtype=np.int8)
    for r, alpha in enumerate(rows):
        for c, f in enumerate(lattice.nodes):
            if pred(f, alpha):
                coef[r, c] = 1
    return LinearSystem(criterion, lattice, rows, coef)


def criterion_sum(criterion: str, atoms: AtomTable, alpha) -> float:
    pred = predicate(criterion)
    alpha = tuple(alpha)
    return sum_where(atoms, lambda f: pred(f, alpha))


def restricted_info_from_atoms(atoms: AtomTable, alpha) -> float:
    return criterion_sum("res", atoms, alpha)


def weak_synergy_from_atoms(atoms: AtomTable, alpha) -> float:
    return criterion_sum("ws", atoms, alpha)


def moderate_synergy_from_atoms(atoms: AtomTable, alpha) -> float:
    return criterion_sum("ms", atoms, alpha)


def strong_synergy_from_atoms(atoms: AtomTable, alpha) -> float:
    return criterion_sum("syn", atoms, alpha)


def unique_info_from_atoms(atoms: AtomTable, alpha) -> float:
    return criterion_sum("unq", atoms, alpha)


# -- translations between weak synergy and restricted information ------------

def ws_as_restricted(alpha, n: int) -> frozenset:
    """Antichain beta with I_ws(alpha) = I_res(beta).

    beta holds the minimal collections contained in none of alpha's.
    """
    alpha = list(alpha)
    return minimal_elements(b for b in range(1, 1 << n) if not any(b & a == b for a in alpha))


def restricted_as_ws(beta, n: int) -> frozenset:
    """Inverse of ws_as_restricted."""
    beta = list(beta)
    return maximal_elements(b for b in range(1, 1 << n) if not any(b & a == a for a in beta))


def _lookup(values, key, lattice: Lattice):
    if isinstance(values, AtomTable):
        return values[key]
    if key in values:
        return values[key]
    if isinstance(key, frozenset):
        node_key = lattice.node(key) if key else None
        if node_key is not None and node_key in values:
            return values[node_key]
        text = format_antichain(key)
        if text in values:
            return values[text]
    raise KeyError(f"no value for {format_antichain(key)}")


def invert_restricted(values, lattice: Lattice) -> AtomTable:
    """Atoms from restricted information on every node.

    Restricted information at a node is the sum of the atoms at or above it,
    so this is Moebius inversion over the reversed order.
    """
    table = AtomTable(lattice, [_lookup(values, x.antichain, lattice) for x in lattice.nodes])
    return moebius_invert(table, dual=True)


def invert_weak_synergy(values, lattice: Lattice) -> AtomTable:
    """Atoms from weak synergy on the empty antichain and every node but the top.

    ``values`` maps antichains (frozensets of masks, text, or nodes) to reals.
    """
    n = lattice.n
    res = {}
    for x in lattice.nodes:
        res[x.antichain] = _lookup(values, restricted_as_ws(x.antichain, n), lattice)
    return invert_restricted(res, lattice)


def weak_synergy_values(atoms: AtomTable) -> dict:
    """Weak synergy on the empty antichain and on every node."""
    out = {frozenset(): weak_synergy_from_atoms(atoms, ())}
    for x in atoms.lattice.nodes:
        out[x.antichain] = weak_synergy_from_atoms(atoms, x.antichain)
    return out


def invert_moderate(values, dist: JointDistribution | None, lattice: Lattice,
                    self_synergy: Mapping[int, float] | None = None,
                    joint: float | None = None) -> AtomTable:
    """Atoms from moderate synergy on every node.

    Single-collection antichains carry no information under this criterion
    (their rows are identically zero), so their equations are replaced by
    the self-synergies I(T : a^C | a). These come from ``dist`` unless
    given in ``self_synergy`` (keyed by collection mask); ``joint`` is the
    full mutual information, likewise taken from ``dist`` by default.
    Every other weak synergy then follows from
    I_ws(alpha) = I_ms(alpha) + I_ws({union of alpha}) and the system is
    solved as a weak-synergy one.
    """
    n = lattice.n
    full = full_mask(n)
    if self_synergy is None or joint is None:
        if dist is None:
            raise ValueError("need a distribution or explicit self-synergies")
        if self_synergy is None:
            self_synergy = {a: conditional_mi(dist, full & ~a, a) for a in range(1, full + 1)}
        if joint is None:
            joint = mutual_information(dist, full)
    ws = {frozenset(): joint}
    for x in lattice.nodes:
        alpha = x.antichain
        if len(alpha) == 1:
            (a,) = alpha
            ws[alpha] = self_synergy[a]
    for x in lattice.nodes:
        alpha = x.antichain
        if len(alpha) < 2:
            continue
        ms = _lookup(values, alpha, lattice)
        u = _union(alpha)
        ws[alpha] = ms if u == full else ms + self_synergy[u]
    return invert_weak_synergy(ws, lattice)


def moderate_synergy_values(atoms: AtomTable) -> AtomTable:
    return AtomTable(atoms.lattice, [moderate_synergy_from_atoms(atoms, x.antichain)
                                     for x in atoms.lattice.nodes])


def restricted_values(atoms: AtomTable) -> AtomTable:
    return AtomTable(atoms.lattice, [restricted_info_from_atoms(atoms, x.antichain)
                                     for x in atoms.lattice.nodes])


# -- rank --------------------------------------------------------------------

def integer_rank(rows) -> int:
    """Rank of an integer matrix by fraction-free row elimination."""
    m = [[int(v) for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank]
        for r in range(rank + 1, len(m)):
            q = m[r][col]
            if q:
                row = [p[col] * m[r][c] - q * p[c] for c in range(ncols)]
                g = reduce(gcd, row, 0)
                m[r] = [v // g for v in row] if g > 1 else row
        rank += 1
    return rank


@dataclass
class RankReport:
    criterion: str
    n: int
    rows: int
    columns: int
    rank: int
    zero_rows: list = field(default_factory=list)
    duplicate_groups: list = field(default_factory=list)
    witness: tuple | None = None

    @property
    def unique(self) -> bool:
        return self.rank == self.columns

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "n": self.n,
            "rows": self.rows,
            "columns": self.columns,
            "rank": self.rank,
            "unique_solution": self.unique,
            "zero_rows": self.zero_rows,
            "duplicate_groups": self.duplicate_groups,
            "witness": list(self.witness) if self.witness else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def rank_check(criterion: str, lattice: Lattice) -> RankReport:
    system = criterion_matrix(criterion, lattice)
    labels = system.row_labels()
    groups: dict[bytes, list[str]] = {}
    zero = []
    for label, row in zip(labels, system.coefficients):
        if not row.any():
            zero.append(label)
        else:
            groups.setdefault(row.tobytes(), []).append(label)
    dups = [g for g in groups.values() if len(g) > 1]
    return RankReport(criterion, lattice.n, len(labels), len(lattice),
                      integer_rank(system.coefficients), zero, dups)


def strong_synergy_rank_check(lattice: Lattice) -> RankReport:
    """Coefficient rank of the strong-synergy system.

    For three sources the rows of {1}{2}{3} and {1,2}{1,3}{2,3} both
    select only the all-way synergy atom; that pair is returned as the
    witness. Other source counts get the report without a witness.
    """
    report = rank_check("syn", lattice)
    if lattice.n == 3:
        pair = ("{1}{2}{3}", "{1,2}{1,3}{2,3}")
        for g in report.duplicate_groups:
            if pair[0] in g and pair[1] in g:
                report.witness = pair
    return report


def singleton_antichains(n: int) -> list[frozenset]:
    """Node antichains made only of single-source collections."""
    singles = [1 << i for i in range(n)]
    return [frozenset(c) for k in range(1, n + 1) for c in combinations(singles, k)]


def complement(mask: int, n: int) -> int:
    return full_mask(n) & ~mask

