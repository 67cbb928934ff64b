"""The lattice of information atoms in its three equivalent views.

A node is identified by the truth table of a monotone Boolean function on
the powerset of ``{1, ..., n}``. Collections of source indices are n-bit
masks (bit ``i - 1`` set for source ``i``) and a truth table is a
``2**n``-bit integer whose bit ``c`` holds the value at collection ``c``.

Order convention: ``x <= y`` iff ``ones(x)`` is a superset of ``ones(y)``.
The node that is 1 on every non-empty collection (all-way shared
information) is the bottom; the node that is 1 only on the full set
(all-way synergy) is the top. Redundancy at a node is the sum of the
atoms at or below it.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

MAX_N = 5
DEDEKIND = {0: 2, 1: 3, 2: 6, 3: 20, 4: 168, 5: 7581, 6: 7828354}

Antichain = frozenset  # frozenset of collection masks


class LatticeError(ValueError):
    """Invalid node, antichain or mismatched source counts."""


class CapacityError(LatticeError):
    pass


class AntichainError(LatticeError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


# -- collections -----------------------------------------------------------

def popcount(x: int) -> int:
    return bin(x).count("1")


def collection_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        i = int(i)
        if i < 1:
            raise LatticeError(f"source index must be >= 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def collection_indices(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def format_collection(mask: int) -> str:
    return "{" + ",".join(map(str, collection_indices(mask))) + "}"


def _collection_key(mask: int):
    return (popcount(mask), mask)


def sorted_collections(masks: Iterable[int]) -> list[int]:
    """Canonical order: by size, then by mask value."""
    return sorted(masks, key=_collection_key)


def minimal_elements(masks: Iterable[int]) -> frozenset:
    """Drop every collection that contains another one."""
    ms = sorted(set(masks), key=_collection_key)
    keep: list[int] = []
    for m in ms:
        if not any(k & m == k for k in keep):
            keep.append(m)
    return frozenset(keep)


def maximal_elements(masks: Iterable[int]) -> frozenset:
    ms = sorted(set(masks), key=_collection_key, reverse=True)
    keep: list[int] = []
    for m in ms:
        if not any(k & m == m for k in keep):
            keep.append(m)
    return frozenset(keep)


# -- antichains ------------------------------------------------------------

def antichain(*collections: Iterable[int]) -> Antichain:
    """Build an antichain from collections given as index iterables.

    >>> format_antichain(antichain({1}, {2, 3}))
    '{1}{2,3}'
    """
    return validate_antichain(collection_mask(c) for c in collections)


def validate_antichain(masks: Iterable[int], n: int | None = None) -> Antichain:
    masks = list(masks)
    for m in masks:
        if m <= 0:
            raise AntichainError("antichains cannot contain the empty collection")
        if n is not None and m >> n:
            raise LatticeError(
                f"collection {format_collection(m)} uses an index above n={n}")
    uniq = sorted_collections(set(masks))
    for a, b in combinations(uniq, 2):
        if a & b == a:
            raise AntichainError(
                f"not an antichain: {format_collection(a)} is contained in "
                f"{format_collection(b)}", pair=(a, b))
    return frozenset(uniq)


def format_antichain(alpha: Iterable[int]) -> str:
    """Text form with the outer braces left out, e.g. ``{1}{2,3}``."""
    cols = sorted_collections(alpha)
    if not cols:
        return "{}"
    return "".join(format_collection(c) for c in cols)


def parse_antichain(text: str, n: int | None = None) -> Antichain:
    """Parse ``1;2,3`` or ``{1}{2,3}`` into an antichain.

    An empty string or ``{}`` gives the empty antichain.
    """
    s = text.strip()
    if s in ("", "{}"):
        return frozenset()
    if s.startswith("{"):
        if not s.endswith("}"):
            raise LatticeError(f"unbalanced braces in {text!r}")
        parts = s[1:-1].split("}{")
    else:
        parts = s.split(";")
    masks = []
    for part in parts:
        part = part.strip()
        if not part:
            raise LatticeError(f"empty collection in {text!r}")
        try:
            idx = [int(tok) for tok in part.split(",")]
        except ValueError:
            raise LatticeError(f"bad collection {part!r} in {text!r}") from None
        masks.append(collection_mask(idx))
    return validate_antichain(masks, n)


def antichain_leq(alpha: Iterable[int], beta: Iterable[int]) -> bool:
    """Crampton-Loizou order, alpha below beta: every b in beta contains some a in alpha."""
    alpha = list(alpha)
    return all(any(b & a == a for a in alpha) for b in beta)


# -- statements ------------------------------------------------------------

@dataclass(frozen=True)
class LogicStatement:
    """A disjunction of logically independent conjunctions.

    Each conjunction is a tuple of propositional-variable indices in
    ascending order; conjunctions are sorted by size, then mask.
    """
    conjunctions: tuple

    def __post_init__(self):
        for conj in self.conjunctions:
            if not conj:
                raise LatticeError("empty conjunction")
            if len(set(conj)) != len(conj):
                raise LatticeError(f"repeated variable in conjunction {conj}")
        validate_antichain(collection_mask(c) for c in self.conjunctions)

    @classmethod
    def from_conjunctions(cls, conjunctions: Iterable[Iterable[int]]) -> LogicStatement:
        return statement_from_antichain(
            validate_antichain(collection_mask(c) for c in conjunctions))

    def satisfied_by(self, valuation: int) -> bool:
        """``valuation`` is the mask of variables that are true."""
        return any(valuation & m == m for m in self.masks())

    def masks(self) -> list[int]:
        return [collection_mask(c) for c in self.conjunctions]

    def __str__(self):
        if not self.conjunctions:
            return "⊥"
        terms = []
        for conj in self.conjunctions:
            t = "∧".join(f"φ{i}" for i in conj)
            if len(conj) > 1 and len(self.conjunctions) > 1:
                t = f"({t})"
            terms.append(t)
        return "∨".join(terms)


def statement_from_antichain(alpha: Iterable[int]) -> LogicStatement:
    alpha = list(alpha)
    if not alpha:
        raise LatticeError("the empty antichain has no statement")
    return LogicStatement(tuple(collection_indices(m) for m in sorted_collections(alpha)))


def antichain_from_statement(stmt: LogicStatement) -> Antichain:
    return frozenset(stmt.masks())


def truth_table(stmt: LogicStatement, n: int) -> Node:
    table = 0
    for v in range(1 << n):
        if stmt.satisfied_by(v):
            table |= 1 << v
    return Node(n, table)


# -- parthood distributions --------------------------------------------------

def full_mask(n: int) -> int:
    return (1 << n) - 1


def _upward_closure(alpha: Iterable[int], n: int) -> int:
    alpha = list(alpha)
    table = 0
    for b in range(1 << n):
        if any(b & a == a for a in alpha):
            table |= 1 << b
    return table


def is_monotone(table: int, n: int) -> bool:
    for b in range(1 << n):
        if table >> b & 1:
            for i in range(n):
                if not table >> (b | 1 << i) & 1:
                    return False
    return True


@dataclass(frozen=True, order=True)
class Node:
    """A parthood distribution, stored as its truth-table mask."""
    n: int
    table: int

    def __post_init__(self):
        if self.n < 1:
            raise LatticeError("need at least one source")
        size = 1 << self.n
        if self.table >> size:
            raise LatticeError("truth table wider than 2**n entries")
        if self.table & 1:
            raise LatticeError("a parthood distribution is 0 on the empty set")
        if not self.table >> full_mask(self.n) & 1:
            raise LatticeError("a parthood distribution is 1 on the full set")
        if not is_monotone(self.table, self.n):
            raise LatticeError(f"truth table {self.table:#x} is not monotone")

    def __call__(self, collection: int) -> int:
        return self.table >> collection & 1

    @property
    def ones(self) -> list[int]:
        return [b for b in range(1 << self.n) if self.table >> b & 1]

    @property
    def num_ones(self) -> int:
        return popcount(self.table)

    @property
    def antichain(self) -> Antichain:
        return antichain_from_parthood(self)

    @property
    def statement(self) -> LogicStatement:
        return statement_from_antichain(self.antichain)

    def bitstring(self) -> str:
        """Truth table values listed for collections 0 .. 2**n - 1."""
        return "".join(str(self(b)) for b in range(1 << self.n))

    def label(self, view: str = "antichain") -> str:
        if view == "antichain":
            return format_antichain(self.antichain)
        if view == "statement":
            return str(self.statement)
        if view == "bitstring":
            return self.bitstring()
        raise LatticeError(f"unknown view {view!r}")

    def __str__(self):
        return format_antichain(self.antichain)


def antichain_from_parthood(f: Node) -> Antichain:
    return minimal_elements(f.ones)


def parthood_from_antichain(alpha: Iterable[int], n: int) -> Node:
    alpha = validate_antichain(alpha, n)
    if not alpha:
        raise LatticeError("the empty antichain is not a lattice node")
    return Node(n, _upward_closure(alpha, n))


def top(n: int) -> Node:
    return Node(n, 1 << full_mask(n))


def bottom(n: int) -> Node:
    return Node(n, ((1 << (1 << n)) - 1) & ~1)


def _check_same_n(x: Node, y: Node):
    if x.n != y.n:
        raise LatticeError(f"source counts differ: {x.n} vs {y.n}")


def leq(f: Node, g: Node) -> bool:
    """True iff f is at or below g, i.e. ones(f) contains ones(g)."""
    _check_same_n(f, g)
    return f.table & g.table == g.table


def meet(x: Node, y: Node) -> Node:
    """Greatest lower bound: the pruned disjunction of both statements."""
    _check_same_n(x, y)
    alpha = minimal_elements(x.antichain | y.antichain)
    return parthood_from_antichain(alpha, x.n)


def join(x: Node, y: Node) -> Node:
    """Least upper bound: distribute the conjunction, merge, then prune."""
    _check_same_n(x, y)
    alpha = minimal_elements(a | b for a in x.antichain for b in y.antichain)
    return parthood_from_antichain(alpha, x.n)


def children(node: Node) -> list[Node]:
    """Lower covers of ``node``, found by extending its truth table.

    Walks the falsifying valuations from the largest down. A falsifying
    valuation can be switched on iff no falsifying valuation with one
    more true variable lies above it; each such switch gives one child.
    """
    n, table = node.n, node.table
    falsifying = [v for v in range(1 << n) if not table >> v & 1]
    k = max((popcount(v) for v in falsifying), default=0)
    found = []
    while k != 0:
        level = [v for v in falsifying if popcount(v) == k]
        for v in level:
            blocked = any(popcount(w) == k + 1 and v & w == v for w in falsifying)
            if not blocked:
                found.append(Node(n, table | 1 << v))
        k -= 1
    return sorted(found, key=lambda c: c.table)


def parents(node: Node) -> list[Node]:
    """Upper covers of ``node`` by a scan over every node.

    A node strictly above differs by exactly one truth-table entry iff it
    covers ``node``.
    """
    out = []
    for y in enumerate_nodes(node.n):
        if y != node and leq(node, y) and node.num_ones - y.num_ones == 1:
            out.append(y)
    return out


# -- enumeration -----------------------------------------------------------

def max_supported_n() -> int:
    try:
        return max(MAX_N, int(os.environ.get("PID_MAX_N", MAX_N)))
    except ValueError:
        return MAX_N


def _check_capacity(n: int, allow_large: bool):
    limit = 6 if allow_large else max_supported_n()
    if n < 1 or n > min(limit, 6):
        raise CapacityError(
            f"n={n} is out of range 1..{min(limit, 6)}: node counts follow the "
            f"Dedekind numbers (n=5: {DEDEKIND[5] - 2}, n=6: {DEDEKIND[6] - 2}); "
            "set PID_MAX_N=6 to unlock n=6")


def _upsets(n: int) -> Iterator[int]:
    """All truth tables with f(empty)=0, f(full)=1 that are monotone."""
    full = full_mask(n)
    # supersets before subsets, so a collection's covers are always decided
    order = sorted(range(1, full), key=lambda c: -popcount(c))
    covers = [[c | 1 << i for i in range(n) if not c >> i & 1] for c in range(full + 1)]
    start = 1 << full

    def rec(pos: int, table: int):
        if pos == len(order):
            yield table
            return
        c = order[pos]
        yield from rec(pos + 1, table)
        if all(table >> s & 1 for s in covers[c]):
            yield from rec(pos + 1, table | 1 << c)

    yield from rec(0, start)


@functools.lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple:
    return tuple(_trusted_node(n, t) for t in sorted(_upsets(n)))


def _trusted_node(n: int, table: int) -> Node:
    # skip the monotonicity re-check for tables the generator built
    node = object.__new__(Node)
    object.__setattr__(node, "n", n)
    object.__setattr__(node, "table", table)
    return node


def enumerate_nodes(n: int, allow_large: bool = False) -> tuple:
    """Every parthood distribution for n sources, ascending by truth table."""
    _check_capacity(n, allow_large)
    return _enumerate(n)


# -- lattice object ----------------------------------------------------------

class Lattice:
    """All nodes for n sources together with their order and cover edges."""

    def __init__(self, n: int, allow_large: bool = False):
        self.n = n
        self.nodes = enumerate_nodes(n, allow_large)
        self.index = {node: i for i, node in enumerate(self.nodes)}
        self._by_antichain = None
        self._down = None
        self._edges = None
        self._truth = None

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def node(self, key) -> Node:
        """Look up a node by Node, antichain (frozenset of masks) or text."""
        if isinstance(key, Node):
            if key.n != self.n:
                raise LatticeError(f"node has n={key.n}, lattice has n={self.n}")
            return key
        if isinstance(key, str):
            key = parse_antichain(key, self.n)
        if self._by_antichain is None:
            self._by_antichain = {x.antichain: x for x in self.nodes}
        try:
            return self._by_antichain[frozenset(key)]
        except KeyError:
            raise LatticeError(f"{format_antichain(key)} is not a node for n={self.n}") from None

    @property
    def bottom(self) -> Node:
        return bottom(self.n)

    @property
    def top(self) -> Node:
        return top(self.n)

    def linear_extension(self) -> list[int]:
        """Node indices sorted bottom-first (descending number of ones)."""
        return sorted(range(len(self.nodes)), key=lambda i: (-self.nodes[i].num_ones, self.nodes[i].table))

    def truth_matrix(self):
        """Boolean array, row per node, column per collection mask."""
        if self._truth is None:
            size = 1 << self.n
            self._truth = np.array([[x.table >> m & 1 for m in range(size)] for x in self.nodes],
                                   dtype=bool)
            self._truth.setflags(write=False)
        return self._truth

    def strict_down_sets(self) -> list[list[int]]:
        """For each node index, the indices of nodes strictly below it."""
        if self._down is None:
            tables = [x.table for x in self.nodes]
            self._down = [
                [j for j, tj in enumerate(tables) if j != i and tj & ti == ti]
                for i, ti in enumerate(tables)
            ]
        return self._down

    def cover_edges(self) -> list[tuple[int, int]]:
        """(child index, parent index) pairs, sorted."""
        if self._edges is None:
            edges = []
            for i, x in enumerate(self.nodes):
                for c in children(x):
                    edges.append((self.index[c], i))
            self._edges = sorted(edges)
        return self._edges


def export_dot(lattice: Lattice, labels: str = "antichain") -> str:
    """DOT digraph of the Hasse diagram, edges pointing from child to parent."""
    lines = [f'digraph "pid_lattice_n{lattice.n}" {{', "  rankdir=BT;",
             '  node [shape=box, fontname="Helvetica"];']
    for x in lattice.nodes:
        label = x.label(labels).replace('"', '\\"')
        lines.append(f'  n{x.table} [label="{label}"];')
    for c, p in lattice.cover_edges():
        lines.append(f"  n{lattice.nodes[c].table} -> n{lattice.nodes[p].table};")
    lines.append("}")
    return "\n".join(lines) + "\n"
