"""Reference computations that share no code with the package.

Everything here is brute force over explicit sets and dicts.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def powerset(n):
    items = range(1, n + 1)
    return [frozenset(c) for k in range(n + 1) for c in itertools.combinations(items, k)]


def monotone_functions(n):
    """All f: powerset -> {0,1} with f(empty)=0, f(full)=1 and monotone.

    Returned as frozensets of the collections mapped to 1 (each collection a
    frozenset of indices). Exhaustive over all 2**(2**n) Boolean functions.
    """
    subsets = powerset(n)
    full = frozenset(range(1, n + 1))
    out = []
    for bits in itertools.product((0, 1), repeat=len(subsets)):
        f = dict(zip(subsets, bits))
        if f[frozenset()] or not f[full]:
            continue
        if all(f[b] for a in subsets if f[a] for b in subsets if a <= b):
            out.append(frozenset(a for a in subsets if f[a]))
    return out


def below(ones_f, ones_g):
    return ones_f >= ones_g


def lower_covers(ones_x, all_ones):
    strictly = [y for y in all_ones if y != ones_x and below(y, ones_x)]
    return [y for y in strictly
            if not any(z != y and below(y, z) for z in strictly)]


def xor_rows():
    q = Fraction(1, 4)
    return {(0, 0, 0): q, (0, 1, 1): q, (1, 0, 1): q, (1, 1, 0): q}


def copy_rows():
    h = Fraction(1, 2)
    return {(0, 0, 0): h, (1, 1, 1): h}


def sx_pointwise(rows, real, alpha):
    """log2 P(A | t) / P(A) by explicit row enumeration (exact fractions)."""
    *s, t = real

    def holds(row):
        return any(all(row[i - 1] == s[i - 1] for i in a) for a in alpha)

    p_a = sum(p for row, p in rows.items() if holds(row))
    p_t = sum(p for row, p in rows.items() if row[-1] == t)
    p_at = sum(p for row, p in rows.items() if holds(row) and row[-1] == t)
    return math.log2((p_at / p_t) / p_a)


def two_source_atoms(rows):
    """Averaged sx atoms for n=2 with the inversion written out by hand.

    Keys: shared, unq1, unq2, syn.
    """
    out = {"shared": 0.0, "unq1": 0.0, "unq2": 0.0, "syn": 0.0}
    for real, p in rows.items():
        if p == 0:
            continue
        r12 = sx_pointwise(rows, real, [{1}, {2}])
        r1 = sx_pointwise(rows, real, [{1}])
        r2 = sx_pointwise(rows, real, [{2}])
        rj = sx_pointwise(rows, real, [{1, 2}])
        shared = r12
        unq1 = r1 - shared
        unq2 = r2 - shared
        syn = rj - unq1 - unq2 - shared
        for k, v in zip(out, (shared, unq1, unq2, syn)):
            out[k] += float(p) * v
    return out


def mutual_info(rows, cols):
    """I(T : S_cols) in bits from a dict of rows; cols are 1-based indices."""
    cols = sorted(cols)
    ps, pt, pst = {}, {}, {}
    for row, p in rows.items():
        if p == 0:
            continue
        s = tuple(row[i - 1] for i in cols)
        t = row[-1]
        ps[s] = ps.get(s, 0) + p
        pt[t] = pt.get(t, 0) + p
        pst[s, t] = pst.get((s, t), 0) + p
    return sum(float(p) * math.log2(float(p) / (float(ps[s]) * float(pt[t])))
               for (s, t), p in pst.items())


def random_rows(rng: np.random.Generator, n: int, sparsity: float = 0.3):
    sizes = rng.integers(2, 4, size=n + 1)
    keys = list(itertools.product(*[range(int(k)) for k in sizes]))
    p = rng.dirichlet(np.full(len(keys), 0.5))
    p[rng.random(len(keys)) < sparsity] = 0.0
    if p.sum() == 0:
        p[0] = 1.0
    p = p / p.sum()
    return {k: float(v) for k, v in zip(keys, p)}
