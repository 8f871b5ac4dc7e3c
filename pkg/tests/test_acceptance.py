"""Acceptance criteria 1-11, each at its stated tolerance.

``conftest.py`` prints one ``ACCEPTANCE k PASS/FAIL`` line per criterion.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from tailspec.graph import TailAttachment, WeightedGraph, attach_tails, gen, truncate
from tailspec.jacobi import (
    FiniteRankJacobi,
    TwoSidedJacobi,
    bethe_pair_jacobi,
    double_star_jacobi,
    jost_function_float,
    jost_polynomial,
    perturbation_determinant_direct,
    wronskian,
)
from tailspec.laurent import LaurentPoly
from tailspec.oracle import bethe_pair_section, compare, graph_section, persistent_outliers
from tailspec.reduce import FREE, reduce_single_tail, reduce_tailed, sun_decompose, verify_canonical
from tailspec.roots import (
    count_roots_unit_interval,
    descartes_bound,
    positive_root_count,
    real_roots_unit_interval,
)
from tailspec.spectra import (
    discrete_spectrum,
    eig_symmetric,
    jacobi_discrete,
    spectral_measure,
    two_sided_roots,
    two_sided_spectrum,
    zhukovsky,
)


def tailed(G, vertex=None):
    return attach_tails(G, [TailAttachment(G.order if vertex is None else vertex)])


def outside(sp, edge=2.0):
    return sorted(e.value for e in sp.discrete if abs(e.value) > edge)


def finite_block_values(cf):
    return np.sort(eig_symmetric(cf.finite_block))


# ---------------------------------------------------------------- 1


@pytest.mark.parametrize("n", range(3, 11))
def test_criterion_01_star_family(n):
    t0 = time.perf_counter()
    T = tailed(gen("star", n=n))
    cf, trace = reduce_tailed(T)
    assert trace.exact
    sp = discrete_spectrum(cf)
    lam = math.sqrt(n - 1) + 1 / math.sqrt(n - 1)
    got = outside(sp)
    assert len(got) == 2
    assert abs(got[0] + lam) < 1e-12 and abs(got[1] - lam) < 1e-12
    zero = [e for e in sp.discrete if abs(e.value) < 1e-12]
    assert len(zero) == 1 and zero[0].multiplicity == n - 1
    rep = compare(sp, T, 400, tol=1e-8)
    assert rep.passed
    assert rep.max_error < 1e-8
    assert time.perf_counter() - t0 < 1.0


# ---------------------------------------------------------------- 2


@pytest.mark.parametrize(
    "weights, norm_sq, expect",
    [
        ([Fraction(6, 5)], Fraction(36, 25), False),
        ([Fraction(1), Fraction(1)], Fraction(2), False),
        ([math.sqrt(2.0)], 2.0, False),
        ([Fraction(3, 2)], Fraction(9, 4), True),
        ([Fraction(1), Fraction(1, 2), Fraction(1)], Fraction(9, 4), True),
    ],
)
def test_criterion_02_weighted_star_threshold(weights, norm_sq, expect):
    G = gen("weighted_star", weights=weights)
    cf, _ = reduce_tailed(tailed(G))
    assert cf.jacobi.a_sq[0] == pytest.approx(norm_sq, abs=1e-15)
    jost = [e for e in discrete_spectrum(cf).discrete if "jost_root" in e.provenance]
    assert bool(jost) == expect
    if expect:
        s = float(norm_sq)
        lam = s / math.sqrt(s - 1)
        assert sorted(e.value for e in jost) == pytest.approx([-lam, lam], abs=1e-12)


# ---------------------------------------------------------------- 3


@pytest.mark.parametrize("n, p", [(3, 2), (4, 3)])
def test_criterion_03_multiple_star(n, p):
    T = tailed(gen("multiple_star", n=n, p=p))
    cf, _ = reduce_tailed(T)
    fb = finite_block_values(cf)
    cos = np.sort(np.repeat([2 * math.cos(math.pi * j / (p + 1)) for j in range(1, p + 1)], n - 1))
    assert np.allclose(fb, cos, atol=1e-10)

    poly = [1, -n] + [0] * (p - 1) + [n - 1]  # (n-1) x^{p+1} - n x + 1
    assert descartes_bound(poly) == 2
    assert positive_root_count(poly) == 2  # x = 1 and x1
    inside = [x for x in real_roots_unit_interval(poly) if x > 0]
    assert len(inside) == 1
    x1 = inside[0]
    lam = zhukovsky(math.sqrt(x1))
    sp = discrete_spectrum(cf)
    assert outside(sp) == pytest.approx([-lam, lam], abs=1e-10)
    for c in set(np.round(cos, 12)):
        hits = [e for e in sp.discrete if abs(e.value - c) < 1e-9]
        assert hits and hits[0].multiplicity == n - 1
    rep = compare(sp, T, 400, tol=1e-8)
    assert rep.passed
    assert all(e.passed and e.multiplicity == n - 1 for e in rep.embedded)


# ---------------------------------------------------------------- 4


@pytest.mark.parametrize("m", [4, 5, 6, 7])
def test_criterion_04_kite(m):
    cf, _ = reduce_tailed(tailed(gen("cycle", m=m)))
    if m % 2:
        k = (m - 1) // 2
        expected = [2 * math.cos(2 * math.pi * j / m) for j in range(1, k + 1)]
    else:
        k = m // 2
        expected = [2 * math.cos(math.pi * j / k) for j in range(1, k)]
    assert np.allclose(finite_block_values(cf), sorted(expected), atol=1e-10)
    kite = [-1, 0, 2] + [0] * (m - 3) + [1]  # x^m + 2x^2 - 1
    xs = real_roots_unit_interval(kite)
    assert len(xs) == 2 and xs[0] < 0 < xs[1]
    sp = discrete_spectrum(cf)
    assert outside(sp) == pytest.approx(sorted(zhukovsky(x) for x in xs), abs=1e-10)
    fb = [e for e in sp.discrete if "finite_block" in e.provenance]
    assert sorted(e.value for e in fb) == pytest.approx(sorted(expected), abs=1e-10)


def test_criterion_04_kite_m3_single_root():
    # x^3 + 2x^2 - 1 = (x + 1)(x^2 + x - 1): the second root sits on the boundary
    roots = real_roots_unit_interval([-1, 0, 2, 1])
    assert roots == pytest.approx([(math.sqrt(5) - 1) / 2], abs=1e-14)
    cf, _ = reduce_tailed(tailed(gen("cycle", m=3)))
    assert outside(discrete_spectrum(cf)) == pytest.approx([zhukovsky(roots[0])], abs=1e-12)


# ---------------------------------------------------------------- 5


@pytest.mark.parametrize("n, count", [(4, 1), (5, 2), (6, 2)])
def test_criterion_05_wheel(n, count):
    cf, _ = reduce_tailed(tailed(gen("wheel", n=n)))
    assert cf.jacobi.b == (2,) and cf.jacobi.a_sq == (n,)
    expected_fb = sorted(2 * math.cos(2 * math.pi * j / n) for j in range(1, n))
    assert np.allclose(finite_block_values(cf), expected_fb, atol=1e-10)
    roots = [(math.sqrt(n) - 1) / (n - 1), -(math.sqrt(n) + 1) / (n - 1)]
    lams = sorted(zhukovsky(z) for z in roots if abs(z) < 1)
    got = [e.value for e in discrete_spectrum(cf).discrete if "jost_root" in e.provenance]
    assert len(got) == count
    assert sorted(got) == pytest.approx(lams, abs=1e-10)


# ---------------------------------------------------------------- 6


def _poly(terms):
    out = LaurentPoly(0, ())
    for k, c in terms:
        out = out + LaurentPoly.monomial(k, Fraction(c))
    return out


def _geom(q):
    # (z^{2q} - 1) / (z^2 - 1)
    return _poly([(2 * j, 1) for j in range(q)])


def _closed_form_cases():
    cases = []
    for q in range(1, 6):
        b = Fraction(3, 2 + q)
        J = FiniteRankJacobi((0,) * (q - 1) + (b,), ())
        cases.append((f"rank1-q{q}", J, 1 - LaurentPoly.monomial(1, b) * _geom(q)))
        a2 = Fraction(q + 2, 3)
        J = FiniteRankJacobi((), (1,) * (q - 1) + (a2,))
        cases.append((f"rank2-q{q}", J, 1 + LaurentPoly.monomial(2, 1 - a2) * _geom(q)))
    b1, a1 = Fraction(-2, 3), Fraction(5, 2)
    cases.append(("jf1", FiniteRankJacobi((b1,), (a1,)), _poly([(2, 1 - a1), (1, -b1), (0, 1)])))
    b1, b2, s1, s2 = Fraction(1, 2), Fraction(-3), Fraction(2), Fraction(7, 5)
    al1, al2 = 1 - s1, 1 - s2
    jf2 = _poly([(4, al2), (3, -(b2 + b1 * al2)), (2, al1 + al2 + b1 * b2), (1, -(b1 + b2)), (0, 1)])
    cases.append(("jf2", FiniteRankJacobi((b1, b2), (s1, s2)), jf2))
    z2m1 = _poly([(2, 1), (0, -1)])
    for q in range(2, 6):
        b1, aq = Fraction(3, 2), Fraction(5, 3)
        al = 1 - aq
        J = FiniteRankJacobi((b1,), (1,) * (q - 1) + (aq,))
        rhs = _poly([(2 * q + 2, al), (2 * q + 1, -al * b1), (3, -b1 * aq), (2, aq), (1, b1), (0, -1)])
        cases.append((f"jf3-q{q}", J, rhs.exact_div(z2m1)))
        bq, s1 = Fraction(2, 7), Fraction(7, 2)
        al1 = 1 - s1
        J = FiniteRankJacobi((0,) * (q - 1) + (bq,), (s1,))
        num = _poly([(2 * q + 1, 1), (2 * q - 1, al1), (3, -al1), (1, -1)]) * (-bq)
        cases.append((f"jf4-q{q}", J, num.exact_div(z2m1) + _poly([(2, al1), (0, 1)])))
        sq = Fraction(4, 9)
        alq = 1 - sq
        J = FiniteRankJacobi((), (s1,) + (1,) * (q - 2) + (sq,))
        num = _poly([(2 * q + 2, 1), (2 * q, al1), (4, -al1), (2, -1)]) * alq
        cases.append((f"jf5-q{q}", J, num.exact_div(z2m1) + _poly([(2, al1), (0, 1)])))
    return cases


@pytest.mark.parametrize("name, J, closed", _closed_form_cases(), ids=lambda x: x if isinstance(x, str) else "")
def test_criterion_06_jost_identities_closed_forms(name, J, closed):
    v0 = jost_polynomial(J).laurent
    assert v0 == closed
    assert perturbation_determinant_direct(J) == v0


def _random_jacobi(rng, q):
    b = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(q)]
    a_sq = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(q)]
    return FiniteRankJacobi(b, a_sq)


def test_criterion_06_jost_identities_random():
    rng = random.Random(20240607)
    for _ in range(100):
        J = _random_jacobi(rng, rng.randint(1, 4))
        assert jost_polynomial(J).laurent == perturbation_determinant_direct(J)
    # rescale constant: u * prod a_j equals the rescaled polynomial
    for _ in range(40):
        J = _random_jacobi(rng, rng.randint(1, 4))
        poly = jost_polynomial(J)
        assert poly.rescale == pytest.approx(math.prod(math.sqrt(float(a)) for a in J.a_sq), rel=1e-15)
        for z in (0.3, -0.55, 0.8, 0.25 + 0.4j):
            v = complex(poly.laurent.to_float()(z))
            u = complex(jost_function_float(J, z))
            assert abs(u * poly.rescale - v) <= 1e-12 * max(1.0, abs(v))


# ---------------------------------------------------------------- 7


@pytest.mark.parametrize("a0_sq, expected", [(Fraction(4), [-2.5, 2.5]), (Fraction(1, 4), [])])
def test_criterion_07_twojm1(a0_sq, expected):
    J2 = TwoSidedJacobi(0, 1, (0, 0), (a0_sq,))
    w, rescale = wronskian(J2)
    # W = rescale * (1/(a0 z) - a0 z) = 1/z - a0^2 z
    assert w == LaurentPoly(-1, (Fraction(1), 0, -a0_sq))
    sp = two_sided_spectrum(J2)
    assert sp.values() == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("p, q, count", [(2, 2, 2), (3, 3, 2), (4, 5, 4)])
def test_criterion_07_double_star(p, q, count):
    J2 = double_star_jacobi(p, q, 1)
    disc = (p - q) ** 2 + 2 * (p + q) - 3
    ys = [(p + q - 1 + s * math.sqrt(disc)) / (2 * (p - 1) * (q - 1)) for s in (-1, 1)]
    lams = sorted(s * (math.sqrt(y) + 1 / math.sqrt(y)) for y in ys if y < 1 for s in (-1, 1))
    assert len(lams) == count
    got = two_sided_spectrum(J2).values()
    assert got == pytest.approx(lams, abs=1e-10)


# ---------------------------------------------------------------- 8


def _sun(G, p):
    return attach_tails(G, [TailAttachment(v, rays=p) for v in range(1, G.order + 1)])


def _sun_values(G, p):
    sd = sun_decompose(G, p)
    vals = []
    for J in sd.blocks:
        vals += [v for v, _, _ in jacobi_discrete(J)]
    return sorted(vals), sd


def test_criterion_08_sun_k2():
    G = gen("path", m=2)
    vals, sd = _sun_values(G, 2)
    assert sd.free_copies.count == 2
    assert vals == pytest.approx([-math.sqrt(5), math.sqrt(5)], abs=1e-10)
    vals1, _ = _sun_values(G, 1)
    assert vals1 == []


def test_criterion_08_sun_p1_path3():
    G = gen("path", m=3)
    vals, _ = _sun_values(G, 1)
    lams = [lam for lam in (-math.sqrt(2), 0.0, math.sqrt(2)) if abs(lam) > 1]
    assert vals == pytest.approx(sorted(lam + 1 / lam for lam in lams), abs=1e-10)
    T = _sun(G, 1)
    from tailspec.analysis import predicted_spectrum

    route, sp, _ = predicted_spectrum(T)
    assert route == "sun"
    assert compare(sp, T, 400, tol=1e-8).passed


# ---------------------------------------------------------------- 9


@pytest.mark.parametrize("d", [2, 3])
def test_criterion_09_bethe_pair(d):
    J2, s = bethe_pair_jacobi(d)
    assert s == d and J2.a_sq == (Fraction(1, d),)
    w, _ = wronskian(J2)
    coeffs = w.shift(-w.low).to_poly()
    assert [z for z in real_roots_unit_interval(coeffs) if z != 0] == []
    assert two_sided_roots(J2) == []
    sp = two_sided_spectrum(J2, d)
    assert sp.discrete == ()
    edge = 2 * math.sqrt(d)
    assert sp.bands[0].hi == pytest.approx(edge)
    assert persistent_outliers(lambda N: bethe_pair_section(d, N), 300, edge + 0.05) == []
    assert compare(sp, lambda N: bethe_pair_section(d, N), 300).passed


# ---------------------------------------------------------------- 10


@pytest.mark.parametrize(
    "J",
    [
        FiniteRankJacobi(),
        FiniteRankJacobi((0,), (3,)),
        FiniteRankJacobi((2, 0), (5,)),
        FiniteRankJacobi((2,), ()),
    ],
    ids=["free", "star", "wheel", "b1=2"],
)
def test_criterion_10_measure_normalization(J):
    m = spectral_measure(J)
    assert abs(m.total_mass() - 1) < 1e-8
    assert all(w > 0 for _, w in m.masses)


def test_criterion_10_point_mass_b1():
    m = spectral_measure(FiniteRankJacobi((2,), ()))
    assert len(m.masses) == 1
    x, w = m.masses[0]
    assert x == pytest.approx(2.5, abs=1e-14)
    assert abs(w - 0.75) < 1e-10
    assert abs(m.continuous_mass() - 0.25) < 1e-8


# ---------------------------------------------------------------- 11


def _grid_count(coeffs, grid):
    vals = np.polynomial.polynomial.polyval(grid, np.asarray(coeffs, dtype=float))
    s = np.sign(vals)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _random_graph(rng, n):
    edges = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < 0.5:
                edges.append((i, j, Fraction(rng.randint(1, 5), rng.randint(1, 3))))
    return WeightedGraph(n, tuple(edges))


def test_criterion_11_property_suites():
    t0 = time.perf_counter()
    rng = random.Random(11)
    grid = (np.arange(10**6) + 0.5) / 10**6 * 2 - 1
    for _ in range(200):
        deg = rng.randint(1, 12)
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([-1, 1]) * rng.randint(1, 9)]
        assert count_roots_unit_interval(coeffs) == _grid_count(coeffs, grid)
        nu, mu = descartes_bound(coeffs), positive_root_count(coeffs)
        assert nu - mu >= 0 and (nu - mu) % 2 == 0
    for _ in range(40):
        G = _random_graph(rng, rng.randint(1, 6))
        A = G.adjacency()
        d = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        cf, trace = reduce_single_tail(A, d)
        res = verify_canonical(A, d, FREE, cf, trace)
        assert res.exact_zero is True
        T = attach_tails(G, [TailAttachment(G.order, bridge=d)])
        N = rng.randint(1, 12)
        small = np.linalg.eigvalsh(truncate(T, N).to_float())
        big = np.linalg.eigvalsh(truncate(T, N + 1).to_float())
        assert np.all(big[:-1] <= small + 1e-12) and np.all(small <= big[1:] + 1e-12)
        sec = graph_section(T, N)
        assert np.allclose(sec.eigenvalues(), small, atol=1e-11)
    assert time.perf_counter() - t0 < 60
