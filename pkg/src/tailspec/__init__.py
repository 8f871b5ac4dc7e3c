"""Exact spectra of finite weighted graphs with infinite paths attached."""

from .analysis import AnalysisReport, analyze
from .graph import (
    SymmetricMatrix,
    TailAttachment,
    TailedGraph,
    WeightedGraph,
    attach_tails,
    gen,
    truncate,
)
from .jacobi import (
    FiniteRankJacobi,
    TwoSidedJacobi,
    double_star_jacobi,
    jost_polynomial,
    jost_solution,
    perturbation_determinant_direct,
    wronskian,
)
from .laurent import LaurentPoly
from .oracle import compare, convergence_study, truncated_eigenvalues
from .reduce import (
    CanonicalForm,
    OracleOnly,
    bethe_coupling,
    normalize_multiray,
    reduce_single_tail,
    sun_decompose,
    verify_canonical,
)
from .roots import descartes_bound, real_roots_unit_interval
from .spectra import Spectrum, discrete_spectrum, eig_symmetric, spectral_measure, zhukovsky

__version__ = "0.1.0"
