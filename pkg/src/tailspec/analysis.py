"""End-to-end analysis of a tailed graph and its JSON report."""

from __future__ import annotations

import json
import re
from collections import defaultdict
from fractions import Fraction

from . import oracle
from .graph import graph_spec_dict
from .jacobi import jost_polynomial
from .rational import format_rational, is_exact
from .reduce import OracleOnly, reduce_tailed, sun_decompose
from .roots import real_roots_unit_interval
from .spectra import (
    FLOAT_EDGE_GUARD,
    Spectrum,
    band_for,
    discrete_spectrum,
    jacobi_discrete,
    merge_eigenvalues,
    spectral_measure,
    zhukovsky,
)

SCHEMA = 1
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class OracleFailure(RuntimeError):
    """The truncation check disagreed with the predicted spectrum."""


# ---------------------------------------------------------------- encoding


def encode(obj):
    """JSON-ready copy: rationals become ``"p/q"`` strings."""
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    return float(obj)


def decode(obj):
    """Inverse of :func:`encode`: rational strings become ``Fraction``."""
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return Fraction(obj)
    return obj


class AnalysisReport:
    """Plain nested data; exact quantities are kept as ``Fraction``."""

    def __init__(self, data):
        self.data = data

    def __getitem__(self, key):
        return self.data[key]

    def __eq__(self, other):
        return isinstance(other, AnalysisReport) and self.data == other.data

    def to_json(self):
        return encode(self.data)

    def dumps(self):
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def loads(cls, text):
        return cls(decode(json.loads(text)))

    @property
    def spectrum_values(self):
        return [e["value"] for e in self.data.get("discrete") or []]


# ---------------------------------------------------------------- routing


def _exact_number(x):
    return Fraction(x) if is_exact(x) else float(x)


def _spectrum_json(sp):
    return {
        "bands": [{"lo": b.lo, "hi": b.hi, "multiplicity": b.multiplicity} for b in sp.bands],
        "discrete": [
            {"value": e.value, "multiplicity": e.multiplicity, "provenance": list(e.provenance)} for e in sp.discrete
        ],
    }


def _jost_json(J):
    poly = jost_polynomial(J)
    roots = real_roots_unit_interval(poly.coeffs)
    if not J.exact:
        roots = [z for z in roots if abs(z) <= 1 - FLOAT_EDGE_GUARD]
    return {
        "coeffs": [_exact_number(c) for c in poly.coeffs],
        "rescale_sq": _exact_number(poly.rescale_sq),
        "degree": poly.degree,
        "roots": roots,
        "eigenvalues": [zhukovsky(z) for z in roots],
    }


def _sun_rays(T):
    """Rays per vertex when every base vertex carries the same unweighted rays, else None."""
    per_vertex = defaultdict(int)
    bridges = set()
    for a in T.attachments:
        if not a.unweighted:
            return None
        per_vertex[a.vertex] += a.rays
        bridges.add(a.bridge)
    counts = set(per_vertex.values())
    if len(per_vertex) != T.base.order or len(counts) != 1 or bridges != {1}:
        return None
    return counts.pop()


def predicted_spectrum(T, mode="auto"):
    """``(route, spectrum, payload)`` for a tailed graph."""
    exact = {"auto": None, "exact": True, "float": False}[mode]
    try:
        cf, trace = reduce_tailed(T, exact=exact)
    except OracleOnly as exc:
        p = _sun_rays(T) if len(T.attachment_vertices) > 1 else None
        if p is None:
            return "oracle_only", None, {"notice": str(exc)}
        sd = sun_decompose(T.base, p)
        items = []
        for J in sd.blocks:
            items += jacobi_discrete(J, source="sun_block")
        sp = Spectrum((band_for(1, T.base.order * p),), merge_eigenvalues(items))
        return "sun", sp, {"sun": sd}
    return "canonical", discrete_spectrum(cf), {"cf": cf, "trace": trace}


def analyze(T, mode="auto", measure=False, oracle_n=None, tol=1e-8):
    """Run the full pipeline; returns an :class:`AnalysisReport`."""
    route, sp, extra = predicted_spectrum(T, mode)
    data = {"schema": SCHEMA, "input": decode(graph_spec_dict(T)), "route": route}
    if route == "canonical":
        cf, trace = extra["cf"], extra["trace"]
        data["mode"] = "exact" if trace.exact else "float"
        data["canonical"] = {
            "vertex": cf.vertex,
            "krylov_depth": cf.krylov_depth,
            "finite_block": [[float(x) for x in row] for row in cf.finite_block.to_float()],
            "jacobi": {
                "b": [_exact_number(x) for x in cf.jacobi.b],
                "a_sq": [_exact_number(x) for x in cf.jacobi.a_sq],
            },
            "free_copies": {"count": cf.free_copies.count, "scale_sq": _exact_number(cf.free_copies.scale_sq)},
        }
        data["trace"] = {"y": [_exact_number(v) for v in trace.y], "z": [_exact_number(v) for v in trace.z]}
        data["jost"] = _jost_json(cf.jacobi)
        if measure:
            m = spectral_measure(cf.jacobi)
            data["measure"] = {
                "point_masses": [[x, w] for x, w in m.masses],
                "continuous_mass": m.continuous_mass(),
                "total_mass": m.total_mass(),
            }
    elif route == "sun":
        sd = extra["sun"]
        data["mode"] = "float"
        data["sun"] = {
            "rays": sd.rays,
            "eigenvalues": list(sd.eigenvalues),
            "free_copies": sd.free_copies.count,
        }
    else:
        data["mode"] = None
        data["notice"] = extra["notice"]
    if sp is not None:
        data.update(_spectrum_json(sp))
    if oracle_n is not None:
        if sp is None:
            data["oracle"] = {
                "sizes": [oracle_n, oracle_n + oracle.STEP],
                "outliers": oracle.persistent_outliers(T, oracle_n, 2.0 + oracle.DELTA, tol),
                "verdict": "n/a",
            }
        else:
            data["oracle"] = oracle.compare(sp, T, oracle_n, tol=tol).to_json()
    return AnalysisReport(data)
