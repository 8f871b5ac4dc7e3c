import math
from fractions import Fraction

import numpy as np
import pytest

from tailspec.graph import TailAttachment, attach_tails, gen, truncate
from tailspec.jacobi import TwoSidedJacobi
from tailspec.oracle import (
    bethe_pair_section,
    compare,
    convergence_study,
    full_tree_pair_adjacency,
    graph_section,
    outliers,
    persistent_outliers,
    truncated_eigenvalues,
    two_sided_section,
)
from tailspec.reduce import reduce_tailed
from tailspec.spectra import Band, DiscreteEigenvalue, Spectrum, discrete_spectrum, two_sided_spectrum


def star_tail(n=4):
    return attach_tails(gen("star", n=n), [TailAttachment(n + 1)])


def test_section_matches_dense():
    T = attach_tails(gen("umbrella"), [TailAttachment(5, bridge=Fraction(3, 2)), TailAttachment(1, rays=2)])
    for N in (0, 3, 11):
        assert np.allclose(truncated_eigenvalues(T, N), np.linalg.eigvalsh(truncate(T, N).to_float()), atol=1e-11)
    with pytest.raises(ValueError):
        graph_section(T, -1)


def test_compare_passes_on_prediction():
    T = star_tail()
    cf, _ = reduce_tailed(T)
    rep = compare(discrete_spectrum(cf), T, 200)
    assert rep.passed and rep.sizes == (200, 217)
    assert len(rep.matches) == 2 and rep.max_error < 1e-10
    assert rep.embedded[0].multiplicity == 3
    assert rep.to_json()["verdict"] == "pass"


def test_compare_flags_wrong_and_missing_values():
    T = star_tail()
    lam = math.sqrt(3) + 1 / math.sqrt(3)
    wrong = Spectrum((Band(-2, 2),), (DiscreteEigenvalue(lam + 1e-3, 1, ("x",)),))
    rep = compare(wrong, T, 200)
    assert not rep.passed
    # the unpredicted negative outlier persists and is reported
    assert rep.spurious and rep.spurious[0] == pytest.approx(-lam)
    missing = Spectrum((Band(-2, 2),), (DiscreteEigenvalue(7.0, 1, ("x",)),))
    assert not compare(missing, T, 200).passed


def test_embedded_multiplicity_is_checked():
    T = star_tail()
    sp = Spectrum((Band(-2, 2),), (DiscreteEigenvalue(0.0, 5, ("finite_block",)),))
    rep = compare(sp, T, 100)
    assert not rep.embedded[0].passed


def test_near_edge_values_are_not_failed():
    sp = Spectrum((Band(-2, 2),), (DiscreteEigenvalue(2.01, 1, ("x",)),))
    rep = compare(sp, star_tail(), 50)
    assert rep.near_edge == (2.01,)


def test_persistent_outliers_on_truncation_artefacts():
    T = star_tail(3)
    found = persistent_outliers(T, 100, 2.05)
    lam = math.sqrt(2) + 1 / math.sqrt(2)
    assert found == pytest.approx([-lam, lam])


def test_convergence_study_decreases():
    T = attach_tails(gen("cycle", m=5), [TailAttachment(5)])
    cf, _ = reduce_tailed(T)
    rows = convergence_study(discrete_spectrum(cf), T, [2, 4, 8, 16])
    errs = [r[2] for r in rows]
    assert errs[-1] < 1e-6 and errs[0] > errs[-1]
    with pytest.raises(ValueError):
        convergence_study(discrete_spectrum(cf), T, [5])


def test_two_sided_section_and_outliers():
    J2 = TwoSidedJacobi(0, 1, (0, 0), (Fraction(4),))
    sec = two_sided_section(J2, 150)
    assert sec.dimension == 302
    assert outliers(sec, 2.05) == pytest.approx([-2.5, 2.5], abs=1e-12)
    assert compare(two_sided_spectrum(J2), lambda N: two_sided_section(J2, N), 150).passed


@pytest.mark.parametrize("d", [2, 3])
def test_bethe_section_agrees_with_full_tree(d):
    depth = 5 if d == 2 else 4
    full = np.linalg.eigvalsh(full_tree_pair_adjacency(d, depth))
    radial = bethe_pair_section(d, depth).eigenvalues()
    # every radial eigenvalue occurs in the full tree pair
    for x in radial:
        assert np.min(np.abs(full - x)) < 1e-9
    assert max(abs(full)) <= 2 * math.sqrt(d) + 1e-9
