from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from tailspec.roots import (
    NonSimpleRootError,
    count_roots_unit_interval,
    descartes_bound,
    divmod_poly,
    gcd_poly,
    positive_root_count,
    real_roots_unit_interval,
    squarefree_part,
)


def from_roots(roots, lead=Fraction(1)):
    p = [lead]
    for r in roots:
        p = [Fraction(0)] + p
        for i in range(len(p) - 1):
            p[i] -= r * p[i + 1]
    return p


def test_known_roots():
    assert real_roots_unit_interval([-1, 0, 2]) == pytest.approx([-(0.5**0.5), 0.5**0.5], abs=1e-15)
    assert real_roots_unit_interval([1, 0, 1]) == []
    assert real_roots_unit_interval([5]) == []


def test_boundary_roots_are_stripped():
    p = from_roots([Fraction(1), Fraction(-1), Fraction(1, 3)])
    assert real_roots_unit_interval(p) == pytest.approx([1 / 3], abs=1e-15)
    assert count_roots_unit_interval(p) == 1
    # double root at the boundary is fine
    assert real_roots_unit_interval(from_roots([Fraction(1), Fraction(1), Fraction(-1, 2)])) == [-0.5]


def test_repeated_interior_root_raises():
    with pytest.raises(NonSimpleRootError):
        real_roots_unit_interval(from_roots([Fraction(1, 2), Fraction(1, 2), Fraction(3)]))


def test_midpoint_roots_found_exactly():
    roots = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(3, 4)]
    assert real_roots_unit_interval(from_roots(roots)) == sorted(float(r) for r in roots)


def test_polynomial_helpers():
    p = from_roots([Fraction(1, 3), Fraction(1, 3), Fraction(2)])
    sq, g = squarefree_part(p)
    assert len(sq) == 3 and len(g) == 2
    q, r = divmod_poly(p, from_roots([Fraction(2)]))
    assert not any(r)
    assert len(gcd_poly(p, from_roots([Fraction(5)]))) == 1


distinct = st.lists(
    st.fractions(min_value=Fraction(-49, 50), max_value=Fraction(49, 50), max_denominator=50),
    min_size=1,
    max_size=7,
    unique=True,
)
outside = st.lists(st.fractions(min_value=1, max_value=5, max_denominator=4), max_size=3)


@given(distinct, outside, st.fractions(min_value=Fraction(1, 3), max_value=4, max_denominator=3))
def test_recovers_planted_roots(inside, far, lead):
    assume(all(abs(a - b) > Fraction(1, 1000) for a in inside for b in inside if a != b))
    p = from_roots(inside + far + [-x for x in far], lead)
    got = real_roots_unit_interval(p)
    assert got == pytest.approx(sorted(float(r) for r in inside), abs=1e-13)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=10))
def test_sturm_count_agrees_with_companion(coeffs):
    assume(coeffs[-1] != 0)
    p = [Fraction(c) for c in coeffs]
    sq = squarefree_part(p)[0]
    r = np.roots([float(c) for c in reversed(sq)])
    real = [x.real for x in r if abs(x.imag) < 1e-7 and abs(x.real) < 1 - 1e-7]
    assume(all(abs(abs(x.real) - 1) > 1e-6 for x in r if abs(x.imag) < 1e-7))
    assume(all(abs(x.imag) > 1e-5 for x in r if abs(x.imag) >= 1e-7))
    assert count_roots_unit_interval(coeffs) == len(real)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=12))
def test_descartes_parity(coeffs):
    assume(any(coeffs))
    nu, mu = descartes_bound(coeffs), positive_root_count(coeffs)
    assert nu >= mu and (nu - mu) % 2 == 0


def test_positive_root_count_with_multiplicity():
    assert positive_root_count(from_roots([Fraction(2), Fraction(2), Fraction(1, 2), Fraction(-1)])) == 3
    assert positive_root_count([0, 0, 1, -1]) == 1
