import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from parthood.decomposition import sx_tables
from parthood.lattice import Lattice, antichain, collection_mask, full_mask
from parthood.probability import JointDistribution, Realization, pointwise_mi
from parthood.redundancy import (PointwiseContext, i_cap_sx, i_cap_sx_split, i_cap_sx_tuple,
                                 statement_event_probability)


@pytest.fixture
def xor_ctx():
    d = JointDistribution.from_dict(oracles.xor_rows())
    return PointwiseContext(d, Realization((0, 0), 0))


def test_event_probabilities_xor(xor_ctx):
    assert statement_event_probability(xor_ctx, antichain({1}, {2})) == (0.75, 0.5)


def test_event_probabilities_full_conjunction():
    d = JointDistribution.from_dict(oracles.random_rows(np.random.default_rng(3), 3, 0.0))
    real, _ = d.support()[0]
    ctx = PointwiseContext(d, real)
    p_a, p_a_t = statement_event_probability(ctx, antichain({1, 2, 3}))
    p_s = sum(p for r, p in d.support() if r.sources == real.sources)
    p_st = sum(p for r, p in d.support() if r == real)
    p_t = sum(p for r, p in d.support() if r.target == real.target)
    assert p_a == pytest.approx(p_s) and p_a_t == pytest.approx(p_st / p_t)


def test_event_probabilities_copy():
    d = JointDistribution.from_dict({(0, 0): .5, (1, 1): .5})
    ctx = PointwiseContext(d, Realization((1,), 1))
    assert statement_event_probability(ctx, antichain({1}))[1] == 1.0


def test_i_cap_sx_xor(xor_ctx):
    assert i_cap_sx(xor_ctx, antichain({1}, {2})) == pytest.approx(math.log2(2 / 3), abs=1e-15)
    assert i_cap_sx(xor_ctx, antichain({1, 2})) == 1.0
    assert i_cap_sx(xor_ctx, antichain({1})) == pointwise_mi(xor_ctx.dist, 0, {1}, (0, 0))


def test_split_xor(xor_ctx):
    plus, minus = i_cap_sx_split(xor_ctx, antichain({1}, {2}))
    assert plus == pytest.approx(math.log2(4 / 3), abs=1e-15)
    assert minus == 1.0
    assert plus - minus == pytest.approx(i_cap_sx(xor_ctx, antichain({1}, {2})), abs=1e-12)


def test_split_certain_event():
    d = JointDistribution.from_dict({(0, 0, 0): .5, (0, 1, 1): .5})
    ctx = PointwiseContext(d, Realization((0, 0), 0))
    plus, _ = i_cap_sx_split(ctx, antichain({1}))
    assert plus == 0.0


def test_zero_mass_context_rejected():
    d = JointDistribution.from_dict({(0, 0): 1.0, (1, 1): 0.0})
    with pytest.raises(ValueError):
        PointwiseContext(d, Realization((1,), 1))


def test_matches_row_enumeration_oracle():
    rows = oracles.random_rows(np.random.default_rng(11), 3)
    d = JointDistribution.from_dict(rows)
    lat = Lattice(3)
    for real, _ in d.support():
        ctx = PointwiseContext(d, real)
        for x in lat:
            alpha = [set(i + 1 for i in range(3) if a >> i & 1) for a in x.antichain]
            expected = oracles.sx_pointwise(rows, (*real.sources, real.target), alpha)
            assert i_cap_sx(ctx, x.antichain) == pytest.approx(expected, abs=1e-12)


def _contexts(seed, n):
    d = JointDistribution.from_dict(oracles.random_rows(np.random.default_rng(seed), n))
    return [PointwiseContext(d, real) for real, _ in d.support()]


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_self_redundancy(seed, n):
    for ctx in _contexts(seed, n):
        real = ctx.realization
        for a in range(1, full_mask(n) + 1):
            expected = pointwise_mi(ctx.dist, real.target, a, real.sources)
            assert i_cap_sx(ctx, frozenset({a})) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_superset_and_repeat_invariance(seed):
    for ctx in _contexts(seed, 3)[:4]:
        base = i_cap_sx(ctx, antichain({1}, {2, 3}))
        assert i_cap_sx_tuple(ctx, [collection_mask(c) for c in ({1}, {2, 3}, {1, 2}, {1})]) == base
        assert i_cap_sx_tuple(ctx, [collection_mask(c) for c in ({2, 3}, {1})]) == base


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3))
def test_split_monotone_along_cover_edges(seed, n):
    lat = Lattice(n)
    for ctx in _contexts(seed, n):
        red, plus, minus = sx_tables(ctx, lat)
        assert np.all(plus.values >= 0) and np.all(minus.values >= 0)
        assert np.allclose(plus.values - minus.values, red.values, atol=1e-12)
        for c, p in lat.cover_edges():
            assert plus.values[p] >= plus.values[c] - 1e-12
            assert minus.values[p] >= minus.values[c] - 1e-12
