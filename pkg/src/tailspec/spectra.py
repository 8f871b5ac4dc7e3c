"""Eigensolvers, discrete-spectrum assembly and spectral measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import SymmetricMatrix
from .jacobi import jost_polynomial, wronskian
from .roots import real_roots_unit_interval

MERGE_TOL = 1e-9
FLOAT_EDGE_GUARD = 1e-10
DENSE_LIMIT = 200
QUAD_NODES = 2048
QUAD_MAX_NODES = 2**22


def zhukovsky(z):
    """``z + 1/z``."""
    if z == 0:
        raise ZeroDivisionError("Zhukovsky map undefined at z = 0")
    return z + 1 / z


# ---------------------------------------------------------------- eigensolvers


def _as_float_array(m):
    if isinstance(m, SymmetricMatrix):
        return m.to_float()
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    return a


def _is_tridiagonal(a):
    n = a.shape[0]
    return n < 3 or not np.any(np.triu(a, 2))


def tridiagonal_eigenvalues(d, e):
    """Ascending eigenvalues of the symmetric tridiagonal matrix with diagonal ``d``, off-diagonal ``e``."""
    d = np.ascontiguousarray(d, dtype=float)
    e2 = np.ascontiguousarray(np.asarray(e, dtype=float) ** 2)
    n = len(d)
    if n == 0:
        return np.empty(0)
    ae = np.abs(np.asarray(e, dtype=float))
    rad = np.zeros(n)
    rad[:-1] += ae
    rad[1:] += ae
    lo = float(np.min(d - rad))
    hi = float(np.max(d + rad))
    pad = 2.0 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0) + 1e-300
    return np.asarray(_kernels.tridiag_eigvals(d, e2, 0, n, lo - pad, hi + pad))


def eig_symmetric(m):
    """Sorted eigenvalues of a real symmetric matrix.

    Tridiagonal input goes through Sturm bisection (any order); other input
    through cyclic Jacobi rotations (order at most 200).
    """
    a = _as_float_array(m)
    n = a.shape[0]
    if n == 0:
        return np.empty(0)
    if _is_tridiagonal(a):
        return tridiagonal_eigenvalues(np.diag(a).copy(), np.diag(a, 1).copy())
    if n > DENSE_LIMIT:
        raise ValueError(f"dense eigensolver limited to order {DENSE_LIMIT}")
    return np.asarray(_kernels.jacobi_eigvals(a))


# ---------------------------------------------------------------- spectrum records


@dataclass(frozen=True)
class Band:
    """Absolutely continuous band ``[lo, hi]``; ``multiplicity`` None means infinite."""

    lo: float
    hi: float
    multiplicity: int | None = 1


@dataclass(frozen=True)
class DiscreteEigenvalue:
    value: float
    multiplicity: int
    provenance: tuple  # sorted sources: finite_block, jost_root, wronskian_root, sun_block


@dataclass(frozen=True)
class Spectrum:
    bands: tuple = ()
    discrete: tuple = ()

    def values(self):
        return [e.value for e in self.discrete]

    def with_multiplicity(self):
        out = []
        for e in self.discrete:
            out += [e.value] * e.multiplicity
        return out

    def outside_bands(self):
        """Discrete eigenvalues not inside any band."""
        return [e for e in self.discrete if not any(b.lo <= e.value <= b.hi for b in self.bands)]


def merge_eigenvalues(items, tol=MERGE_TOL):
    """Group ``(value, multiplicity, source)`` triples whose values agree within ``tol``."""
    items = sorted(items, key=lambda t: t[0])
    groups = []
    for v, m, src in items:
        if groups and v - groups[-1][-1][0] <= tol:
            groups[-1].append((v, m, src))
        else:
            groups.append([(v, m, src)])
    out = []
    for g in groups:
        total = sum(m for _, m, _ in g)
        value = sum(v * m for v, m, _ in g) / total
        out.append(DiscreteEigenvalue(float(value), total, tuple(sorted({s for _, _, s in g}))))
    return tuple(out)


def merge_bands(bands):
    """Combine bands with identical endpoints, adding multiplicities."""
    acc = {}
    for b in bands:
        key = (b.lo, b.hi)
        if key in acc:
            m0 = acc[key]
            acc[key] = None if m0 is None or b.multiplicity is None else m0 + b.multiplicity
        else:
            acc[key] = b.multiplicity
    return tuple(Band(lo, hi, m) for (lo, hi), m in sorted(acc.items()))


def band_for(scale_sq, multiplicity=1):
    r = 2.0 * math.sqrt(float(scale_sq))
    return Band(-r, r, multiplicity)


def jost_roots(J):
    """Roots of the Jost polynomial in (-1, 1); float input drops roots near the circle."""
    poly = jost_polynomial(J)
    roots = real_roots_unit_interval(poly.coeffs)
    if not J.exact:
        roots = [z for z in roots if abs(z) <= 1.0 - FLOAT_EDGE_GUARD]
    return roots


def jacobi_discrete(J, scale_sq=1, source="jost_root"):
    """Eigenvalues of ``sqrt(scale_sq) * J`` below and above its band."""
    s = math.sqrt(float(scale_sq))
    return [(s * zhukovsky(z), 1, source) for z in jost_roots(J)]


def discrete_spectrum(cf):
    """Spectrum of a canonical form: finite block eigenvalues and Jost images."""
    items = [(float(v), 1, "finite_block") for v in eig_symmetric(cf.finite_block)]
    items += jacobi_discrete(cf.jacobi, cf.jacobi_scale_sq)
    bands = [band_for(cf.jacobi_scale_sq)]
    fc = cf.free_copies
    if fc.count is None or fc.count > 0:
        bands.append(band_for(fc.scale_sq, fc.count))
    return Spectrum(merge_bands(bands), merge_eigenvalues(items))


def two_sided_roots(J2):
    w, _ = wronskian(J2)
    coeffs = w.shift(-w.low).to_poly()
    roots = [z for z in real_roots_unit_interval(coeffs) if z != 0]
    if not J2.exact:
        roots = [z for z in roots if abs(z) <= 1.0 - FLOAT_EDGE_GUARD]
    return roots


def two_sided_spectrum(J2, scale_sq=1, extra_bands=()):
    """Band and eigenvalues of ``sqrt(scale_sq) * J2`` from Wronskian zeros."""
    s = math.sqrt(float(scale_sq))
    items = [(s * zhukovsky(z), 1, "wronskian_root") for z in two_sided_roots(J2)]
    return Spectrum(merge_bands([band_for(scale_sq, 2), *extra_bands]), merge_eigenvalues(items))


# ---------------------------------------------------------------- spectral measure


@dataclass(frozen=True)
class SpectralMeasure:
    """``w(x) dx`` on (-2, 2) plus point masses at the eigenvalues.

    Built from the rescaled Jost polynomial ``v`` with ``|u|**2 = |v|**2 / P``
    and ``P = prod a_j**2``.
    """

    coeffs: tuple
    rescale_sq: float
    masses: tuple = field(default=())  # ((eigenvalue, mass), ...)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) >= 2):
            raise ValueError("density is defined on (-2, 2) only")
        t = np.arccos(x / 2)
        v = np.polynomial.polynomial.polyval(np.exp(1j * t), np.asarray(self.coeffs, dtype=float))
        return np.sqrt(4 - x * x) * self.rescale_sq / (2 * np.pi * np.abs(v) ** 2)

    def _midpoint(self, nodes):
        t = (np.arange(nodes) + 0.5) * np.pi / nodes
        v = np.polynomial.polynomial.polyval(np.exp(1j * t), np.asarray(self.coeffs, dtype=float))
        f = 2 * np.sin(t) ** 2 * self.rescale_sq / (np.pi * np.abs(v) ** 2)
        return float(np.sum(f) * np.pi / nodes)

    def continuous_mass(self, nodes=None):
        """Mass of ``w(x) dx`` by the midpoint rule in ``t`` (``x = 2 cos t``).

        With ``nodes=None`` the grid starts at ``QUAD_NODES`` and doubles until
        two estimates agree, which matters when a Jost zero sits just outside
        the unit circle and the density is sharply peaked.
        """
        if nodes is not None:
            return self._midpoint(nodes)
        n = QUAD_NODES
        prev = self._midpoint(n)
        while n < QUAD_MAX_NODES:
            n *= 2
            cur = self._midpoint(n)
            if abs(cur - prev) <= 1e-13 * max(1.0, abs(cur)):
                return cur
            prev = cur
        return prev

    def point_mass_total(self):
        return float(sum(m for _, m in self.masses))

    def total_mass(self, nodes=None):
        return self.continuous_mass(nodes) + self.point_mass_total()


def spectral_measure(J):
    """Spectral measure of ``J`` for its first basis vector."""
    poly = jost_polynomial(J)
    c = np.asarray(poly.coeffs, dtype=float)
    dc = np.polynomial.polynomial.polyder(c)
    p_sq = float(poly.rescale_sq)
    masses = []
    for z in jost_roots(J):
        num = z * (1 - z**-2) ** 2 * p_sq
        den = np.polynomial.polynomial.polyval(z, dc) * np.polynomial.polynomial.polyval(1 / z, c)
        masses.append((zhukovsky(z), float(num / den)))
    masses.sort()
    return SpectralMeasure(tuple(float(x) for x in c), p_sq, tuple(masses))
