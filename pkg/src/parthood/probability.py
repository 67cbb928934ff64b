"""Exact discrete joint distributions over (s1, ..., sn, t).

Information quantities are in bits. Zero-mass realizations are kept in the
table (and flagged) but contribute nothing to averages.
"""
from __future__ import annotations

import csv
import io
import json
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, NamedTuple, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-12


class DistributionError(ValueError):
    """Malformed or invalid distribution input."""

    def __init__(self, msg, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.row = row
        self.column = column


class Realization(NamedTuple):
    sources: tuple
    target: Any


def parse_probability(p) -> float:
    """Accept real numbers (Fraction included), decimal and ``num/den`` strings."""
    if isinstance(p, numbers.Real) and not isinstance(p, bool):
        return float(p)
    if isinstance(p, str):
        try:
            return float(Fraction(p.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ValueError(f"not a probability: {p!r}")


def as_mask(collection) -> int:
    """Collections are given as an int bitmask or an iterable of 1-based indices."""
    if isinstance(collection, (int, np.integer)):
        return int(collection)
    mask = 0
    for i in collection:
        if int(i) < 1:
            raise ValueError(f"source index must be >= 1, got {i}")
        mask |= 1 << (int(i) - 1)
    return mask


@dataclass(frozen=True, eq=False)
class JointDistribution:
    n: int
    realizations: tuple          # tuple of Realization, in input order
    probs: np.ndarray            # float64, aligned with realizations
    alphabets: tuple = field(default=())   # per variable (sources..., target)

    def __post_init__(self):
        if self.n < 1:
            raise DistributionError("need at least one source")
        if len(self.realizations) != len(self.probs):
            raise DistributionError("realizations and probabilities differ in length")
        if not self.realizations:
            raise DistributionError("empty distribution")
        probs = np.asarray(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        seen = set()
        for r, (real, p) in enumerate(zip(self.realizations, probs), start=1):
            if len(real.sources) != self.n:
                raise DistributionError(
                    f"expected {self.n} source values, got {len(real.sources)}", row=r)
            if not math.isfinite(p) or p < 0:
                raise DistributionError(f"negative or non-finite mass {p}", row=r)
            if real in seen:
                raise DistributionError(f"duplicate realization {tuple(real.sources)}, {real.target!r}", row=r)
            seen.add(real)
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DistributionError(f"masses sum to {total!r}, not 1")
        if not self.alphabets:
            object.__setattr__(self, "alphabets", self._infer_alphabets())
        else:
            for r, real in enumerate(self.realizations, start=1):
                for k, v in enumerate((*real.sources, real.target)):
                    if v not in self.alphabets[k]:
                        raise DistributionError(f"value {v!r} outside declared alphabet", row=r)
        codes = np.empty((len(self.realizations), self.n + 1), dtype=np.int64)
        lookup = [{v: i for i, v in enumerate(alpha)} for alpha in self.alphabets]
        for r, real in enumerate(self.realizations):
            for k, v in enumerate((*real.sources, real.target)):
                codes[r, k] = lookup[k][v]
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    def _infer_alphabets(self):
        alphabets = [dict() for _ in range(self.n + 1)]
        for real in self.realizations:
            for k, v in enumerate((*real.sources, real.target)):
                alphabets[k].setdefault(v, None)
        return tuple(tuple(a) for a in alphabets)

    @classmethod
    def from_rows(cls, rows: Iterable[tuple], n: int | None = None) -> JointDistribution:
        """Build from ``(sources, target, p)`` triples."""
        reals, probs = [], []
        for r, row in enumerate(rows, start=1):
            try:
                sources, target, p = row
                probs.append(parse_probability(p))
            except ValueError as exc:
                raise DistributionError(str(exc), row=r) from None
            reals.append(Realization(tuple(sources), target))
        if n is None:
            if not reals:
                raise DistributionError("empty distribution")
            n = len(reals[0].sources)
        return cls(n, tuple(reals), np.array(probs, dtype=float))

    @classmethod
    def from_dict(cls, table: dict, n: int | None = None) -> JointDistribution:
        """Build from ``{(s1, ..., sn, t): p}``."""
        return cls.from_rows(((k[:-1], k[-1], p) for k, p in table.items()), n)

    @property
    def zero_mass(self) -> list:
        return [real for real, p in zip(self.realizations, self.probs) if p == 0]

    def support(self) -> list:
        """Positive-mass realizations with their masses, in input order."""
        return [(real, float(p)) for real, p in zip(self.realizations, self.probs) if p > 0]

    def target_codes(self) -> np.ndarray:
        return self.codes[:, self.n]

    def to_csv(self) -> str:
        """Echo the parsed table; masses printed with full float precision."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"s{i}" for i in range(1, self.n + 1)] + ["t", "p"])
        for real, p in zip(self.realizations, self.probs):
            w.writerow([*real.sources, real.target, repr(float(p))])
        return buf.getvalue()


# -- loading ---------------------------------------------------------------

def load_distribution(source: str, fmt: str | None = None) -> JointDistribution:
    """Parse a distribution from CSV or JSON text.

    ``fmt`` is ``"csv"`` or ``"json"``; when omitted it is guessed from the
    first non-blank character.
    """
    if fmt is None:
        fmt = "json" if source.lstrip().startswith("{") else "csv"
    if fmt == "json":
        return _load_json(source)
    if fmt == "csv":
        return _load_csv(source)
    raise DistributionError(f"unknown input format {fmt!r}")


def read_distribution(path: str) -> JointDistribution:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    fmt = "json" if path.lower().endswith(".json") else None
    return load_distribution(text, fmt)


def _load_csv(text: str) -> JointDistribution:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if not rows:
        raise DistributionError("no header row")
    header = [h.strip() for h in rows[0]]
    n = len(header) - 2
    expected = [f"s{i}" for i in range(1, n + 1)] + ["t", "p"]
    if n < 1:
        raise DistributionError("header needs at least s1, t and p", row=1)
    if sorted(header) != sorted(expected):
        unknown = [h for h in header if h not in expected]
        col = unknown[0] if unknown else None
        raise DistributionError(f"header must be {','.join(expected)}", row=1, column=col)
    pos = {h: k for k, h in enumerate(header)}
    triples = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DistributionError(f"expected {len(header)} fields, got {len(row)}", row=r)
        row = [c.strip() for c in row]
        try:
            p = parse_probability(row[pos["p"]])
        except ValueError as exc:
            raise DistributionError(str(exc), row=r, column="p") from None
        sources = tuple(row[pos[f"s{i}"]] for i in range(1, n + 1))
        triples.append((sources, row[pos["t"]], p))
    if not triples:
        raise DistributionError("no data rows")
    return JointDistribution.from_rows(triples, n)


def _load_json(text: str) -> JointDistribution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DistributionError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "rows" not in doc:
        raise DistributionError('expected an object with "n" and "rows"')
    unknown = set(doc) - {"n", "rows"}
    if unknown:
        raise DistributionError("unknown key", column=sorted(unknown)[0])
    n = doc.get("n")
    triples = []
    for r, row in enumerate(doc["rows"], start=1):
        if not isinstance(row, dict):
            raise DistributionError("row must be an object", row=r)
        extra = set(row) - {"s", "t", "p"}
        if extra:
            raise DistributionError("unknown field", row=r, column=sorted(extra)[0])
        for key in ("s", "t", "p"):
            if key not in row:
                raise DistributionError("missing field", row=r, column=key)
        s = row["s"]
        if not isinstance(s, list):
            raise DistributionError("s must be a list", row=r, column="s")
        if n is not None and len(s) != n:
            raise DistributionError(f"expected {n} source values, got {len(s)}", row=r, column="s")
        try:
            p = parse_probability(row["p"])
        except ValueError as exc:
            raise DistributionError(str(exc), row=r, column="p") from None
        triples.append((tuple(_hashable(v) for v in s), _hashable(row["t"]), p))
    if not triples:
        raise DistributionError("no data rows")
    return JointDistribution.from_rows(triples, n)


def _hashable(v):
    return tuple(v) if isinstance(v, list) else v


# -- information quantities ------------------------------------------------

def probability_of_event(dist: JointDistribution, event: Callable[[Realization], bool]) -> float:
    return float(sum(p for real, p in zip(dist.realizations, dist.probs) if event(real)))


def _source_columns(mask: int, n: int) -> list[int]:
    if mask >> n:
        raise ValueError(f"collection uses a source index above n={n}")
    return [i for i in range(n) if mask >> i & 1]


def pointwise_mi(dist: JointDistribution, target, collection, sources: Sequence) -> float:
    """log2 P(t | s_a) / P(t) for the source values ``sources``.

    ``sources`` holds one value per source (a Realization works too; only
    the entries in the collection are used).
    """
    if isinstance(sources, Realization):
        sources = sources.sources
    cols = _source_columns(as_mask(collection), dist.n)
    t_mask = np.array([real.target == target for real in dist.realizations])
    s_mask = np.array([all(real.sources[c] == sources[c] for c in cols)
                       for real in dist.realizations], dtype=bool)
    p = dist.probs
    p_t = p[t_mask].sum()
    p_s = p[s_mask].sum()
    if p_s <= 0 or p_t <= 0:
        raise ValueError("conditioning event has zero probability")
    p_ts = p[t_mask & s_mask].sum()
    if p_ts <= 0:
        return -math.inf
    return math.log2(p_ts / (p_s * p_t))


def _joint_codes(codes: np.ndarray, cols: list[int]) -> np.ndarray:
    if not cols:
        return np.zeros(len(codes), dtype=np.int64)
    _, inv = np.unique(codes[:, cols], axis=0, return_inverse=True)
    return inv.reshape(-1)


def mutual_information(dist: JointDistribution, collection) -> float:
    """I(T : S_a) in bits, the mass-weighted average of pointwise_mi."""
    cols = _source_columns(as_mask(collection), dist.n)
    if not cols:
        return 0.0
    p = dist.probs
    s = _joint_codes(dist.codes, cols)
    t = dist.target_codes()
    st = _joint_codes(dist.codes, cols + [dist.n])
    p_s = np.bincount(s, weights=p)[s]
    p_t = np.bincount(t, weights=p)[t]
    p_st = np.bincount(st, weights=p)[st]
    pos = p > 0
    mi = float(np.sum(p[pos] * np.log2(p_st[pos] / (p_s[pos] * p_t[pos]))))
    return max(mi, 0.0)  # clip round-off below zero


def conditional_mi(dist: JointDistribution, collection, given) -> float:
    """I(T : S_a | S_b) via the chain rule, I(T : S_{a u b}) - I(T : S_b)."""
    a, b = as_mask(collection), as_mask(given)
    if a & ~b == 0:
        return 0.0
    return mutual_information(dist, a | b) - mutual_information(dist, b)
