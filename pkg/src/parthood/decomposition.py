"""Pointwise and averaged decompositions of a joint distribution."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import alternate
from .atoms import AtomTable, moebius_invert, sum_where
from .lattice import Lattice, format_antichain, format_collection, full_mask
from .probability import JointDistribution, Realization, mutual_information
from .redundancy import PointwiseContext, surprisal

MEASURES = ("sx", "res", "ws", "ms", "unq")
DEFAULT_TOL = 1e-9


def measure_on_lattice(ctx: PointwiseContext, lattice: Lattice,
                       measure: Callable[[PointwiseContext, frozenset], float]) -> AtomTable:
    """Evaluate ``measure(ctx, antichain)`` on every node."""
    return AtomTable(lattice, [measure(ctx, x.antichain) for x in lattice.nodes])


def _event_tables(ctx: PointwiseContext, lattice: Lattice):
    truth = lattice.truth_matrix()
    p_a = truth @ ctx.agree_mass
    p_a_t = (truth @ ctx.agree_mass_t) / ctx.p_target
    return p_a, p_a_t


def sx_tables(ctx: PointwiseContext, lattice: Lattice):
    """Redundancy and its informative / misinformative parts on every node."""
    p_a, p_a_t = _event_tables(ctx, lattice)
    plus = np.array([surprisal(p) for p in p_a])
    minus = np.array([surprisal(p) for p in p_a_t])
    return (AtomTable(lattice, plus - minus), AtomTable(lattice, plus),
            AtomTable(lattice, minus))


@dataclass
class ConsistencyReport:
    """Residuals I(T : a) - sum of atoms with f(a) = 1, per collection a."""
    residuals: dict                 # collection mask -> residual
    tolerance: float
    max_residual: float
    worst: int | None

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    @property
    def failing(self) -> list[int]:
        """Collections whose residual exceeds the tolerance."""
        return [a for a, r in self.residuals.items() if abs(r) > self.tolerance]

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = f" at {format_collection(self.worst)}" if self.worst is not None else ""
        return (f"consistency {status}: max |residual| = {self.max_residual:.3g}{where} "
                f"(tolerance {self.tolerance:g}, {len(self.residuals)} collections)")

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "worst_collection": format_collection(self.worst) if self.worst is not None else None,
            "failing": [format_collection(a) for a in self.failing],
            "residuals": {format_collection(a): r for a, r in self.residuals.items()},
        }


@dataclass
class DecompositionResult:
    measure_name: str
    dist: JointDistribution
    lattice: Lattice
    averaged: AtomTable                          # atoms
    measure_values: AtomTable                    # averaged measure per node
    pointwise: dict = field(default_factory=dict)          # Realization -> atoms
    pointwise_measure: dict = field(default_factory=dict)  # Realization -> measure
    averaged_plus: AtomTable | None = None
    averaged_minus: AtomTable | None = None
    measure_plus: AtomTable | None = None
    measure_minus: AtomTable | None = None
    pointwise_plus: dict = field(default_factory=dict)
    pointwise_minus: dict = field(default_factory=dict)
    diagnostics: ConsistencyReport | None = None
    extra: dict = field(default_factory=dict)

    def atom(self, key) -> float:
        return self.averaged[key]

    def rows(self) -> list[dict]:
        out = []
        for i, x in enumerate(self.lattice.nodes):
            row = {"node": format_antichain(x.antichain),
                   "atom": float(self.averaged.values[i]),
                   "measure_value": float(self.measure_values.values[i])}
            if self.averaged_plus is not None:
                row["atom_plus"] = float(self.averaged_plus.values[i])
                row["atom_minus"] = float(self.averaged_minus.values[i])
            out.append(row)
        return out


def _sorted_support(dist: JointDistribution):
    # ascending by alphabet codes so the averaging order is fixed
    items = [(tuple(int(c) for c in dist.codes[r]), real, float(p))
             for r, (real, p) in enumerate(zip(dist.realizations, dist.probs)) if p > 0]
    items.sort(key=lambda it: it[0])
    return [(real, p) for _, real, p in items]


def decompose_sx(dist: JointDistribution, lattice: Lattice | None = None,
                 keep_pointwise: bool = True) -> DecompositionResult:
    lattice = lattice or Lattice(dist.n)
    size = len(lattice)
    avg = {k: np.zeros(size) for k in ("atom", "plus", "minus", "m", "mplus", "mminus")}
    res = DecompositionResult("sx", dist, lattice, None, None)
    for real, p in _sorted_support(dist):
        ctx = PointwiseContext(dist, real)
        red, plus, minus = sx_tables(ctx, lattice)
        atoms = moebius_invert(red)
        atoms_plus = moebius_invert(plus)
        atoms_minus = moebius_invert(minus)
        avg["atom"] += p * atoms.values
        avg["plus"] += p * atoms_plus.values
        avg["minus"] += p * atoms_minus.values
        avg["m"] += p * red.values
        avg["mplus"] += p * plus.values
        avg["mminus"] += p * minus.values
        if keep_pointwise:
            res.pointwise[real] = atoms
            res.pointwise_measure[real] = red
            res.pointwise_plus[real] = atoms_plus
            res.pointwise_minus[real] = atoms_minus
    res.averaged = AtomTable(lattice, avg["atom"])
    res.measure_values = AtomTable(lattice, avg["m"])
    res.averaged_plus = AtomTable(lattice, avg["plus"])
    res.averaged_minus = AtomTable(lattice, avg["minus"])
    res.measure_plus = AtomTable(lattice, avg["mplus"])
    res.measure_minus = AtomTable(lattice, avg["mminus"])
    return res


def decompose(dist: JointDistribution, measure: str = "sx", lattice: Lattice | None = None,
              keep_pointwise: bool = True, tolerance: float = DEFAULT_TOL) -> DecompositionResult:
    """Decompose I(T : S1, ..., Sn) into averaged atoms.

    ``sx`` inverts the shared-exclusion redundancy per realization and
    averages. The other systems have no standalone measure of their own:
    their per-node values are generated from the averaged sx atoms through
    their parthood criteria and then inverted through their own system, so
    the atoms reported are the ones that system recovers.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    lattice = lattice or Lattice(dist.n)
    base = decompose_sx(dist, lattice, keep_pointwise=keep_pointwise and measure == "sx")
    if measure == "sx":
        result = base
    else:
        seed = base.averaged
        if measure == "res":
            values = alternate.restricted_values(seed)
            atoms = alternate.invert_restricted(values, lattice)
            extra = {}
        elif measure == "ws":
            ws = alternate.weak_synergy_values(seed)
            values = AtomTable(lattice, [ws[x.antichain] for x in lattice.nodes])
            atoms = alternate.invert_weak_synergy(ws, lattice)
            extra = {"ws_empty": ws[frozenset()]}
        elif measure == "ms":
            values = alternate.moderate_synergy_values(seed)
            atoms = alternate.invert_moderate(values, dist, lattice)
            extra = {}
        else:
            values = AtomTable(lattice, [alternate.unique_info_from_atoms(seed, x.antichain)
                                         for x in lattice.nodes])
            atoms = values
            extra = {}
        result = DecompositionResult(measure, dist, lattice, atoms, values, extra=extra)
    result.diagnostics = validate_consistency(result, dist, tolerance)
    return result


def validate_consistency(result: DecompositionResult | AtomTable, dist: JointDistribution,
                         tolerance: float = DEFAULT_TOL) -> ConsistencyReport:
    """Check I(T : a) = sum of atoms whose parthood distribution is 1 at a."""
    atoms = result.averaged if isinstance(result, DecompositionResult) else result
    residuals = {}
    for a in range(1, full_mask(dist.n) + 1):
        residuals[a] = mutual_information(dist, a) - sum_where(atoms, lambda f: f(a) == 1)
    worst = max(residuals, key=lambda a: abs(residuals[a]))
    return ConsistencyReport(residuals, tolerance, abs(residuals[worst]), worst)


# -- serialization -------------------------------------------------------------

def fmt_num(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _columns(result: DecompositionResult, split: bool) -> list[str]:
    cols = ["node", "atom"]
    if split and result.averaged_plus is not None:
        cols += ["atom_plus", "atom_minus"]
    return cols + ["measure_value"]


def atoms_to_csv(result: DecompositionResult, split: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = _columns(result, split)
    w.writerow(cols)
    for row in result.rows():
        w.writerow([row[c] if c == "node" else fmt_num(row[c]) for c in cols])
    return buf.getvalue()


def _json_num(x: float) -> float:
    return float(fmt_num(x))


def atoms_to_json(result: DecompositionResult, split: bool = False,
                  pointwise: bool = False) -> str:
    cols = _columns(result, split)
    doc = {
        "measure": result.measure_name,
        "n": result.lattice.n,
        "atoms": [{c: (row[c] if c == "node" else _json_num(row[c])) for c in cols}
                  for row in result.rows()],
    }
    if result.diagnostics is not None:
        diag = result.diagnostics.to_dict()
        diag["max_residual"] = _json_num(diag["max_residual"])
        diag["residuals"] = {k: _json_num(v) for k, v in diag["residuals"].items()}
        doc["consistency"] = diag
    if pointwise and result.pointwise:
        doc["pointwise"] = [_pointwise_entry(result, real, split) for real in result.pointwise]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _pointwise_entry(result: DecompositionResult, real: Realization, split: bool) -> dict:
    atoms = result.pointwise[real]
    entry = {"s": list(real.sources), "t": real.target, "atoms": {}}
    for i, x in enumerate(result.lattice.nodes):
        key = format_antichain(x.antichain)
        vals = {"atom": _json_num(atoms.values[i]),
                "measure_value": _json_num(result.pointwise_measure[real].values[i])}
        if split:
            vals["atom_plus"] = _json_num(result.pointwise_plus[real].values[i])
            vals["atom_minus"] = _json_num(result.pointwise_minus[real].values[i])
        entry["atoms"][key] = vals
    return entry


def pointwise_to_csv(result: DecompositionResult, split: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = result.lattice.n
    cols = ["node", "atom"] + (["atom_plus", "atom_minus"] if split else []) + ["measure_value"]
    w.writerow([f"s{i}" for i in range(1, n + 1)] + ["t"] + cols)
    for real, atoms in result.pointwise.items():
        for i, x in enumerate(result.lattice.nodes):
            vals = [fmt_num(atoms.values[i])]
            if split:
                vals += [fmt_num(result.pointwise_plus[real].values[i]),
                         fmt_num(result.pointwise_minus[real].values[i])]
            vals.append(fmt_num(result.pointwise_measure[real].values[i]))
            w.writerow([*real.sources, real.target, format_antichain(x.antichain), *vals])
    return buf.getvalue()
