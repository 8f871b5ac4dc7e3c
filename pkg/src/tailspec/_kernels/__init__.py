"""Hot numerical kernels: Sturm counts, inertia, bisection, rotations.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when the environment variable ``TAILSPEC_PURE_PYTHON`` is set to a
non-empty value, the reference implementation in ``_pykernels`` is used.
``BACKEND`` names the active choice.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("TAILSPEC_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

tridiag_count = _active.tridiag_count
tridiag_eigvals = _active.tridiag_eigvals
arrow_count = _active.arrow_count
arrow_eigvals = _active.arrow_eigvals
dense_negatives = _active.dense_negatives
jacobi_eigvals = _active.jacobi_eigvals

__all__ = [
    "BACKEND",
    "arrow_count",
    "arrow_eigvals",
    "compiled_backend",
    "dense_negatives",
    "jacobi_eigvals",
    "python_backend",
    "tridiag_count",
    "tridiag_eigvals",
]
