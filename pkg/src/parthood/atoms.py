"""Per-node tables and the Moebius inversion between measures and atoms."""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .lattice import Lattice, Node, format_antichain


class AtomTable:
    """One real value per lattice node, stored in lattice order.

    Index with a Node, an antichain (frozenset of masks) or antichain text.
    """

    def __init__(self, lattice: Lattice, values: Iterable[float]):
        values = np.array(values if isinstance(values, np.ndarray) else list(values), dtype=float)
        if values.shape != (len(lattice),):
            raise ValueError(f"need {len(lattice)} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("atom table values must be finite")
        values.setflags(write=False)
        self.lattice = lattice
        self.values = values

    @classmethod
    def from_mapping(cls, lattice: Lattice, mapping: Mapping) -> AtomTable:
        vals = np.zeros(len(lattice))
        seen = set()
        for key, v in mapping.items():
            i = lattice.index[lattice.node(key)]
            seen.add(i)
            vals[i] = v
        if len(seen) != len(lattice):
            raise ValueError(f"mapping covers {len(seen)} of {len(lattice)} nodes")
        return cls(lattice, vals)

    @classmethod
    def zeros(cls, lattice: Lattice) -> AtomTable:
        return cls(lattice, np.zeros(len(lattice)))

    def __getitem__(self, key) -> float:
        return float(self.values[self.lattice.index[self.lattice.node(key)]])

    def __len__(self):
        return len(self.values)

    def items(self):
        return [(x, float(v)) for x, v in zip(self.lattice.nodes, self.values)]

    def to_dict(self) -> dict:
        """Keyed by antichain text such as ``{1}{2}``."""
        return {format_antichain(x.antichain): float(v) for x, v in self.items()}

    def replace(self, index: int, value: float) -> AtomTable:
        vals = self.values.copy()
        vals[index] = value
        return AtomTable(self.lattice, vals)

    def __repr__(self):
        body = ", ".join(f"{k}: {v:.6g}" for k, v in self.to_dict().items())
        return f"AtomTable(n={self.lattice.n}, {{{body}}})"


def strict_up_sets(lattice: Lattice) -> list[list[int]]:
    down = lattice.strict_down_sets()
    up: list[list[int]] = [[] for _ in down]
    for i, below in enumerate(down):
        for j in below:
            up[j].append(i)
    return up


def moebius_invert(table: AtomTable, dual: bool = False) -> AtomTable:
    """Atoms whose sums over down-sets reproduce ``table``.

    Bottom-up subtraction along a linear extension:
    atom(f) = table(f) - sum of atoms strictly below f. With ``dual=True``
    the order is reversed and sums run over up-sets instead.
    """
    lat = table.lattice
    order = lat.linear_extension()
    strict = lat.strict_down_sets()
    if dual:
        order = order[::-1]
        strict = strict_up_sets(lat)
    atoms = np.zeros(len(lat))
    for i in order:
        atoms[i] = table.values[i] - atoms[strict[i]].sum()
    return AtomTable(lat, atoms)


def forward_sum(atoms: AtomTable, dual: bool = False) -> AtomTable:
    """Inverse of moebius_invert: sum atoms over each closed down-set."""
    lat = atoms.lattice
    strict = strict_up_sets(lat) if dual else lat.strict_down_sets()
    vals = [atoms.values[i] + atoms.values[strict[i]].sum() for i in range(len(lat))]
    return AtomTable(lat, vals)


def sum_where(atoms: AtomTable, predicate) -> float:
    """Sum of atoms at nodes where ``predicate(node)`` holds, in lattice order."""
    total = 0.0
    for x, v in zip(atoms.lattice.nodes, atoms.values):
        if predicate(x):
            total += v
    return float(total)


def redundancy_from_atoms(atoms: AtomTable, alpha) -> float:
    """Sum of the atoms at or below the node of ``alpha``."""
    node = alpha if isinstance(alpha, Node) else atoms.lattice.node(alpha)
    t = node.table
    return sum_where(atoms, lambda g: g.table & t == t)
