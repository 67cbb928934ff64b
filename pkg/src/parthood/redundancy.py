"""Shared-exclusion pointwise redundancy.

For a realization (s1, ..., sn, t) and an antichain alpha, the redundancy is
the pointwise mutual information between T = t and the truth of the
statement "for some a in alpha, S_i = s_i for every i in a".

A row of the joint table makes that statement true iff the set of sources
on which it agrees with the realization contains some a in alpha, i.e. iff
the node's truth table is 1 at that agreement set. Every context therefore
reduces to two vectors of length 2**n: the mass of rows per agreement set,
overall and restricted to T = t.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .lattice import Node, _upward_closure, validate_antichain
from .probability import JointDistribution, Realization


class PointwiseContext:
    """A distribution together with one positive-mass realization."""

    def __init__(self, dist: JointDistribution, realization: Realization):
        if not isinstance(realization, Realization):
            realization = Realization(tuple(realization[0]), realization[1])
        mass = {real: p for real, p in zip(dist.realizations, dist.probs)}.get(realization, 0.0)
        if mass <= 0:
            raise ValueError(f"realization {realization} has zero mass")
        self.dist = dist
        self.realization = realization
        self.mass = float(mass)
        n = dist.n
        agree = np.zeros(len(dist.realizations), dtype=np.int64)
        for i in range(n):
            hit = np.fromiter((real.sources[i] == realization.sources[i]
                               for real in dist.realizations), dtype=bool,
                              count=len(dist.realizations))
            agree |= hit.astype(np.int64) << i
        on_target = np.fromiter((real.target == realization.target
                                 for real in dist.realizations), dtype=bool,
                                count=len(dist.realizations))
        size = 1 << n
        self.agree_mass = np.bincount(agree, weights=dist.probs, minlength=size)
        self.agree_mass_t = np.bincount(agree[on_target], weights=dist.probs[on_target],
                                        minlength=size)
        self.p_target = float(self.agree_mass_t.sum())

    def event_probabilities(self, table: int) -> tuple[float, float]:
        """P(A) and P(A | t) for the event whose truth table is ``table``."""
        size = len(self.agree_mass)
        sel = np.array([table >> m & 1 for m in range(size)], dtype=bool)
        p_a = float(self.agree_mass[sel].sum())
        p_a_t = float(self.agree_mass_t[sel].sum()) / self.p_target
        return p_a, p_a_t


def _table_of(alpha, n: int) -> int:
    if isinstance(alpha, Node):
        return alpha.table
    alpha = validate_antichain(alpha, n)
    if not alpha:
        raise ValueError("redundancy needs a non-empty antichain")
    return _upward_closure(alpha, n)


def _table_of_tuple(collections: Iterable[int], n: int) -> int:
    # any tuple of collections, not necessarily an antichain
    cols = [int(c) for c in collections]
    if not cols or any(c <= 0 for c in cols):
        raise ValueError("need non-empty collections")
    return _upward_closure(cols, n)


def statement_event_probability(ctx: PointwiseContext, alpha) -> tuple[float, float]:
    """(P(A), P(A | t)) for the disjunction-of-conjunctions event A."""
    return ctx.event_probabilities(_table_of(alpha, ctx.dist.n))


def i_cap_sx(ctx: PointwiseContext, alpha) -> float:
    p_a, p_a_t = statement_event_probability(ctx, alpha)
    return math.log2(p_a_t / p_a)


def i_cap_sx_tuple(ctx: PointwiseContext, collections: Iterable[int]) -> float:
    """Redundancy of an arbitrary tuple of collection masks.

    Repeats and supersets are allowed; they do not change the event.
    """
    p_a, p_a_t = ctx.event_probabilities(_table_of_tuple(collections, ctx.dist.n))
    return math.log2(p_a_t / p_a)


def i_cap_sx_split(ctx: PointwiseContext, alpha) -> tuple[float, float]:
    """Informative and misinformative parts: (-log2 P(A), -log2 P(A | t))."""
    p_a, p_a_t = statement_event_probability(ctx, alpha)
    return surprisal(p_a), surprisal(p_a_t)


def surprisal(p: float) -> float:
    return 0.0 if p >= 1.0 else -math.log2(p)
