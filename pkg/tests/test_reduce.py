import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailspec.graph import SymmetricMatrix, TailAttachment, WeightedGraph, attach_tails, gen, truncate
from tailspec.jacobi import FREE, FiniteRankJacobi, jost_polynomial
from tailspec.oracle import full_tree_pair_adjacency
from tailspec.reduce import (
    OracleOnly,
    bethe_coupling,
    normalize_multiray,
    reduce_single_tail,
    reduce_tailed,
    sun_decompose,
    truncated_canonical_eigenvalues,
    verify_canonical,
)
from tailspec.spectra import discrete_spectrum


def one_tail(G, **kw):
    return attach_tails(G, [TailAttachment(G.order, **kw)])


@pytest.mark.parametrize(
    "kind, params, b, a_sq",
    [
        ("star", {"n": 4}, (0,), (4,)),
        ("wheel", {"n": 5}, (2,), (5,)),
        ("cycle", {"m": 5}, (1, 0), (1, 2)),
        ("propeller", {"n": 2}, (1, 0), (1, 4)),
        ("sword", {}, (), (Fraction(1, 3), Fraction(2, 3), 3)),
        ("umbrella", {}, (Fraction(-1, 2), Fraction(3, 2)), (Fraction(1, 4), 4)),
        ("complete_bipartite", {"p": 2, "q": 3}, (), (4, 2)),
    ],
)
def test_fixture_jacobi_components(kind, params, b, a_sq):
    cf, trace = reduce_tailed(one_tail(gen(kind, **params)))
    assert trace.exact
    assert cf.jacobi == FiniteRankJacobi(b, a_sq)
    res = verify_canonical(gen(kind, **params).adjacency(), 1, FREE, cf, trace)
    assert res.exact_zero and res.ok()


def test_sword_jost_polynomial():
    cf, _ = reduce_tailed(one_tail(gen("sword")))
    assert jost_polynomial(cf.jacobi).coeffs == (1, 0, -1, 0, -3, 0, -2)


def test_float_mode_agrees_with_exact():
    T = one_tail(gen("umbrella"), bridge=Fraction(3, 2))
    cf_e, _ = reduce_tailed(T)
    cf_f, tr = reduce_tailed(T, exact=False)
    assert not tr.exact
    assert np.allclose([float(x) for x in cf_f.jacobi.b], [float(x) for x in cf_e.jacobi.b], atol=1e-12)
    assert np.allclose([float(x) for x in cf_f.jacobi.a_sq], [float(x) for x in cf_e.jacobi.a_sq], atol=1e-12)
    assert np.allclose(np.sort(np.linalg.eigvalsh(cf_f.finite_block.to_float())),
                       np.sort(np.linalg.eigvalsh(cf_e.finite_block.to_float())), atol=1e-12)


def test_zero_row_stops_immediately():
    A = SymmetricMatrix([[0, 1, 0], [1, 0, 0], [0, 0, Fraction(2)]])
    cf, trace = reduce_single_tail(A)
    assert trace.steps == 0 and cf.krylov_depth == 1
    assert cf.jacobi == FiniteRankJacobi((2,), ())
    assert cf.finite_block.order == 2


def test_multiray_normalization():
    T = attach_tails(gen("path", m=3), [TailAttachment(3, rays=2), TailAttachment(3, bridge=Fraction(2))])
    prob = normalize_multiray(T)
    assert prob.bridge_sq == 6 and prob.free_copies.count == 2
    with pytest.raises(OracleOnly):
        normalize_multiray(attach_tails(gen("path", m=3), [TailAttachment(1), TailAttachment(3)]))
    with pytest.raises(OracleOnly):
        normalize_multiray(
            attach_tails(gen("path", m=3), [TailAttachment(3, rays=2, tail_weights={1: Fraction(2)})])
        )


def test_exact_requires_rational_data():
    with pytest.raises(ValueError):
        reduce_single_tail(np.eye(2), exact=True)
    with pytest.raises(ValueError):
        reduce_single_tail(SymmetricMatrix([[Fraction(0)]]), vertex=2)


def test_sun_decompose_counts():
    sd = sun_decompose(gen("cycle", m=4), 3)
    assert sd.free_copies.count == 8 and len(sd.blocks) == 4
    assert sorted(sd.eigenvalues) == pytest.approx([-2, 0, 0, 2], abs=1e-12)


def test_bethe_coupling_matches_full_tree():
    # G = star S_20 joined by a unit bridge to the root of a binary tree of depth 9
    G = gen("star", n=20)
    cf, _ = bethe_coupling(G, 2)
    assert cf.jacobi_scale_sq == 2 and cf.free_copies.count is None
    predicted = max(discrete_spectrum(cf).values())
    depth = 9
    tree = full_tree_pair_adjacency(2, depth)[: 2**(depth + 1) - 1, : 2**(depth + 1) - 1]
    n = G.order
    big = np.zeros((n + tree.shape[0],) * 2)
    big[:n, :n] = G.adjacency().to_float()
    big[n:, n:] = tree
    big[n - 1, n] = big[n, n - 1] = 1.0
    top = np.linalg.eigvalsh(big)[-1]
    assert predicted == pytest.approx(top, abs=1e-8)
    assert predicted == pytest.approx(4.5954839, abs=1e-7)


def test_bethe_degree_one_is_a_path():
    cf1, _ = bethe_coupling(gen("star", n=3), 1)
    cf0, _ = reduce_tailed(one_tail(gen("star", n=3)))
    assert cf1.jacobi == cf0.jacobi


# ---------------------------------------------------------------- properties

weight = st.fractions(min_value=Fraction(1, 3), max_value=3, max_denominator=3)


@st.composite
def graphs(draw, max_order=6):
    n = draw(st.integers(1, max_order))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return WeightedGraph(n, tuple((i, j, draw(weight)) for i, j in chosen))


@st.composite
def tailed_graphs(draw):
    G = draw(graphs())
    v = draw(st.integers(1, G.order))
    rays = draw(st.integers(1, 3))
    tw = {}
    if rays == 1:
        tw = draw(st.dictionaries(st.integers(1, 3), weight, max_size=2))
    return attach_tails(G, [TailAttachment(v, rays=rays, bridge=draw(weight), tail_weights=tw)])


@given(graphs(), weight, st.data())
def test_exact_residuals_vanish(G, d, data):
    v = data.draw(st.integers(1, G.order))
    A = G.adjacency()
    cf, trace = reduce_single_tail(A, d, vertex=v)
    res = verify_canonical(A, d, FREE, cf, trace)
    assert res.exact_zero is True
    assert res.ok(1e-10)


@given(graphs(), weight)
def test_float_residuals_small(G, d):
    A = G.adjacency(exact=False)
    cf, trace = reduce_single_tail(A, float(d))
    assert verify_canonical(A, float(d), FREE, cf, trace).ok(1e-10)


@settings(max_examples=40)
@given(tailed_graphs(), st.integers(0, 8))
def test_canonical_form_matches_truncation(T, N):
    cf, _ = reduce_tailed(T)
    got = np.sort(truncated_canonical_eigenvalues(cf, N))
    want = np.linalg.eigvalsh(truncate(T, N, exact=False).to_float())
    assert np.allclose(got, want, atol=1e-9)


@settings(max_examples=40)
@given(tailed_graphs())
def test_discrete_values_embed_in_large_truncation(T):
    cf, _ = reduce_tailed(T)
    sp = discrete_spectrum(cf)
    edge = max(max(abs(b.lo), abs(b.hi)) for b in sp.bands)
    ev = np.linalg.eigvalsh(truncate(T, 100, exact=False).to_float())
    for e in sp.discrete:
        if abs(e.value) > edge + 0.05:
            assert np.min(np.abs(ev - e.value)) < 1e-8
    assert math.isfinite(edge)
