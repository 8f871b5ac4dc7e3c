"""Reduction of a graph with a tail to a finite block plus a Jacobi matrix.

Starting from the attachment vertex ``v`` the symmetric three-term
recursion

    A x_k = x_{k+1} + y_k x_k + z_k x_{k-1},    x_0 = e_v,

is run until ``x_{K+1}`` vanishes.  The vectors ``x_0..x_K`` span the part
of the base graph that talks to the tail; in that basis ``A`` is tridiagonal
and, glued to the tail through the bridge, forms one Jacobi matrix.  The
orthogonal complement carries a finite symmetric block that decouples.

With rational input the recursion is run unnormalised in exact arithmetic
(``z_k = N_k / N_{k-1}`` with ``N_k = |x_k|**2``), so termination is an
exact zero test.  Float input uses normalised vectors with full
reorthogonalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import SymmetricMatrix, TailedGraph
from .jacobi import FREE, FiniteRankJacobi
from .rational import is_exact, rational_sqrt
from .spectra import eig_symmetric

COMPLETION_TOL = 1e-8
TERMINATION_TOL = 1e-10


class OracleOnly(ValueError):
    """Configuration with no symbolic reduction; only the truncation oracle applies."""


@dataclass(frozen=True)
class FreeCopies:
    """Extra free Jacobi summands ``sqrt(scale_sq) * J_0``; ``count`` None is unbounded."""

    count: int | None = 0
    scale_sq: object = 1

    @property
    def unbounded(self):
        return self.count is None


@dataclass(frozen=True)
class ReductionTrace:
    y: tuple  # y_0 .. y_K
    z: tuple  # z_1 .. z_K
    norms: tuple  # N_0 .. N_K (squared lengths; all 1 in float mode)
    steps: int  # K
    exact: bool
    final_residual: float = 0.0


@dataclass(frozen=True)
class CanonicalForm:
    """``A`` with a tail, rewritten as ``finite_block (+) sqrt(s) * jacobi (+) free copies``.

    ``krylov`` holds the normalised vectors ``x_0..x_K`` (columns) and
    ``complement`` an orthonormal basis of the rest; the finite block is
    ``A`` compressed to ``complement``.  In exact mode the unnormalised
    vectors and the exact Gram data of the block are kept as well.
    """

    finite_block: SymmetricMatrix
    jacobi: FiniteRankJacobi
    vertex: int
    krylov: np.ndarray
    complement: np.ndarray
    free_copies: FreeCopies = FreeCopies()
    jacobi_scale_sq: object = 1
    exact_krylov: tuple | None = None
    exact_complement: tuple | None = None
    exact_block_gram: tuple | None = None
    exact_block_norms: tuple | None = None

    @property
    def krylov_depth(self):
        """Number of Jacobi basis vectors inside the base graph (``K + 1``)."""
        return self.krylov.shape[1]

    @property
    def exact(self):
        return self.exact_krylov is not None

    @property
    def basis(self):
        """Orthonormal basis: complement columns, then ``x_K .. x_0``."""
        return np.hstack([self.complement, self.krylov[:, ::-1]])


@dataclass(frozen=True)
class SingleTailProblem:
    matrix: SymmetricMatrix
    vertex: int
    bridge_sq: object
    tail: FiniteRankJacobi
    free_copies: FreeCopies = field(default_factory=FreeCopies)


# ---------------------------------------------------------------- exact reduction


def _dot(u, w):
    return sum((a * b for a, b in zip(u, w) if a and b), Fraction(0))


def _matvec(a, x):
    n = len(x)
    return [sum((a[i][j] * x[j] for j in range(n) if x[j] and a[i][j]), Fraction(0)) for i in range(n)]


def _complete_exact(a, vecs, norms, need):
    n = len(a)
    out, out_norms = [], []
    basis = list(zip(vecs, norms))
    for i in range(n):
        if len(out) == need:
            break
        w = [Fraction(0)] * n
        w[i] = Fraction(1)
        for u, nu in basis:
            c = u[i] / nu
            if c:
                w = [wi - c * ui for wi, ui in zip(w, u)]
        if any(w):
            nw = _dot(w, w)
            out.append(w)
            out_norms.append(nw)
            basis.append((w, nw))
    return out, out_norms


def _reduce_exact(A, v, d_sq, tail):
    a = [list(r) for r in A.data]
    n = len(a)
    x0 = [Fraction(0)] * n
    x0[v] = Fraction(1)
    vecs, norms, ys, zs = [x0], [Fraction(1)], [], []
    w = _matvec(a, x0)
    ys.append(w[v])
    r = [wi - ys[0] * xi for wi, xi in zip(w, x0)]
    while any(r):
        nk = _dot(r, r)
        zs.append(nk / norms[-1])
        vecs.append(r)
        norms.append(nk)
        w = _matvec(a, r)
        yk = _dot(w, r) / nk
        ys.append(yk)
        r = [wi - yk * ri - zs[-1] * pi for wi, ri, pi in zip(w, r, vecs[-2])]
    K = len(vecs) - 1
    comp, comp_norms = _complete_exact(a, vecs, norms, n - K - 1)
    gram = [[_dot(ci, _matvec(a, cj)) for cj in comp] for ci in comp]
    scale = [math.sqrt(float(m)) for m in comp_norms]
    block = [[float(gram[i][j]) / (scale[i] * scale[j]) for j in range(len(comp))] for i in range(len(comp))]
    for i in range(len(comp)):
        for j in range(i):
            block[j][i] = block[i][j]
    krylov = np.array([[float(x) for x in vec] for vec in vecs]).T / np.sqrt([float(m) for m in norms])
    complement = (
        np.array([[float(x) for x in vec] for vec in comp]).T / np.array(scale) if comp else np.zeros((n, 0))
    )
    jac = FiniteRankJacobi(
        tuple(reversed(ys)) + tail.b,
        tuple(reversed(zs)) + (d_sq,) + tail.a_sq,
    )
    cf = CanonicalForm(
        finite_block=SymmetricMatrix(block, exact=False),
        jacobi=jac,
        vertex=v + 1,
        krylov=krylov.reshape(n, K + 1),
        complement=complement.reshape(n, n - K - 1),
        exact_krylov=tuple(tuple(x) for x in vecs),
        exact_complement=tuple(tuple(x) for x in comp),
        exact_block_gram=tuple(tuple(r) for r in gram),
        exact_block_norms=tuple(comp_norms),
    )
    trace = ReductionTrace(tuple(ys), tuple(zs), tuple(norms), K, True)
    return cf, trace


# ---------------------------------------------------------------- float reduction


def _orthogonalize(w, q):
    if q.shape[1]:
        w = w - q @ (q.T @ w)
        w = w - q @ (q.T @ w)
    return w


def _reduce_float(A, v, d_sq, tail):
    a = A.to_float()
    n = a.shape[0]
    thresh = TERMINATION_TOL * max(float(np.max(np.abs(a))) if n else 0.0, 1e-300) * math.sqrt(n)
    q = np.zeros((n, 1))
    q[v, 0] = 1.0
    ys, zs = [], []
    final = 0.0
    while True:
        k = q.shape[1] - 1
        w = a @ q[:, k]
        yk = float(q[:, k] @ w)
        ys.append(yk)
        w = w - yk * q[:, k]
        if k:
            w = w - math.sqrt(zs[-1]) * q[:, k - 1]
        w = _orthogonalize(w, q)
        beta = float(np.linalg.norm(w))
        if beta < thresh or q.shape[1] == n:
            final = beta
            break
        zs.append(beta * beta)
        q = np.hstack([q, (w / beta)[:, None]])
    K = q.shape[1] - 1
    comp = np.zeros((n, 0))
    for i in range(n):
        if comp.shape[1] == n - K - 1:
            break
        e = np.zeros(n)
        e[i] = 1.0
        w = _orthogonalize(_orthogonalize(e, q), comp)
        w = _orthogonalize(_orthogonalize(w, q), comp)
        nw = float(np.linalg.norm(w))
        if nw > COMPLETION_TOL:
            comp = np.hstack([comp, (w / nw)[:, None]])
    if comp.shape[1] != n - K - 1:
        raise ArithmeticError("orthogonal completion failed")
    block = comp.T @ a @ comp
    block = 0.5 * (block + block.T)
    tail = tail.to_float()
    jac = FiniteRankJacobi(
        tuple(reversed(ys)) + tail.b,
        tuple(reversed(zs)) + (float(d_sq),) + tail.a_sq,
    )
    cf = CanonicalForm(
        finite_block=SymmetricMatrix(block, exact=False),
        jacobi=jac,
        vertex=v + 1,
        krylov=q,
        complement=comp,
    )
    trace = ReductionTrace(tuple(ys), tuple(zs), (1.0,) * (K + 1), K, False, final)
    return cf, trace


def reduce_single_tail(A, d=1, tail=FREE, *, vertex=None, d_sq=None, exact=None):
    """Canonical form of ``A`` with one tail attached at ``vertex`` (default: last).

    ``d`` is the bridge weight; pass ``d_sq`` instead to give its square
    exactly (for bridges such as ``sqrt(p)``).  ``exact`` forces the mode;
    by default exact arithmetic is used whenever all data are rational.
    """
    if not isinstance(A, SymmetricMatrix):
        A = SymmetricMatrix(A)
    n = A.order
    vertex = n if vertex is None else vertex
    if not 1 <= vertex <= n:
        raise ValueError(f"attachment vertex {vertex} out of range 1..{n}")
    if d_sq is None:
        d_sq = d * d if is_exact(d) else float(d) ** 2
    if not d_sq > 0:
        raise ValueError("bridge weight must be positive")
    can_exact = A.exact and is_exact(d_sq) and tail.exact
    if exact is None:
        exact = can_exact
    if exact and not can_exact:
        raise ValueError("exact mode needs rational matrix, bridge square and tail")
    if exact:
        return _reduce_exact(A, vertex - 1, Fraction(d_sq), tail)
    return _reduce_float(A, vertex - 1, d_sq, tail)


# ---------------------------------------------------------------- special configurations


def _tail_jacobi(att):
    q = att.tail_rank
    return FiniteRankJacobi((), tuple(att.tail_weight(j) ** 2 for j in range(1, q + 1)))


def normalize_multiray(T: TailedGraph):
    """Single-tail problem equivalent to ``T`` plus the free copies split off.

    ``p`` unweighted rays with bridges ``d_i`` at one vertex act like one ray
    with bridge ``sqrt(sum d_i**2)`` plus ``p - 1`` free copies.
    """
    verts = T.attachment_vertices
    if len(verts) != 1:
        raise OracleOnly("oracle-only configuration: tails attached at distinct vertices")
    rays = T.total_rays
    A = T.base.adjacency()
    if rays == 1:
        att = T.attachments[0]
        d_sq = att.bridge**2 if is_exact(att.bridge) else float(att.bridge) ** 2
        return SingleTailProblem(A, verts[0], d_sq, _tail_jacobi(att), FreeCopies(0))
    if any(not a.unweighted for a in T.attachments):
        raise OracleOnly("oracle-only configuration: weighted tails on several rays")
    d_sq = sum((a.rays * a.bridge**2 if is_exact(a.bridge) else a.rays * float(a.bridge) ** 2) for a in T.attachments)
    return SingleTailProblem(A, verts[0], d_sq, FREE, FreeCopies(rays - 1))


def reduce_problem(problem, exact=None):
    cf, trace = reduce_single_tail(
        problem.matrix, tail=problem.tail, vertex=problem.vertex, d_sq=problem.bridge_sq, exact=exact
    )
    return _with(cf, free_copies=problem.free_copies), trace


def reduce_tailed(T, exact=None):
    """Canonical form of a tailed graph whose tails share one vertex."""
    problem = normalize_multiray(T)
    if exact is False:
        problem = SingleTailProblem(
            problem.matrix.as_float(), problem.vertex, float(problem.bridge_sq), problem.tail.to_float(), problem.free_copies
        )
    return reduce_problem(problem, exact=exact)


def _with(cf, **changes):
    from dataclasses import replace

    return replace(cf, **changes)


@dataclass(frozen=True)
class SunDecomposition:
    """``n`` blocks ``J({lambda_j}, {sqrt(p)})`` plus ``(p - 1) n`` free copies."""

    eigenvalues: tuple
    blocks: tuple
    free_copies: FreeCopies
    rays: int


def sun_decompose(G, p):
    """Graph with ``p`` rays at every vertex, split along the eigenvectors of ``G``."""
    if p < 1:
        raise ValueError("ray count must be at least 1")
    lams = tuple(float(x) for x in eig_symmetric(G.adjacency()))
    blocks = tuple(FiniteRankJacobi((lam,), (float(p),)) for lam in lams)
    return SunDecomposition(lams, blocks, FreeCopies((p - 1) * G.order), p)


def bethe_coupling(G, d, vertex=None, exact=None):
    """Canonical form of ``G`` joined by a unit bridge to the root of a ``d``-ary tree.

    The radial part is ``sqrt(d)`` times a Jacobi matrix whose leading block
    is the base recursion scaled by ``1/sqrt(d)`` (diagonal) and ``1/d``
    (squared off-diagonals, bridge included); everything else splits into
    infinitely many copies of ``sqrt(d) * J_0``.
    """
    d = int(d)
    if d < 1:
        raise ValueError("tree degree must be >= 1")
    A = G.adjacency() if exact is not False else G.adjacency(exact=False)
    cf, trace = reduce_single_tail(A, 1, FREE, vertex=vertex, exact=exact)
    if d == 1:
        return cf, trace
    ys = list(reversed(trace.y))
    zs = list(reversed(trace.z)) + [Fraction(1) if trace.exact else 1.0]
    root = rational_sqrt(d)
    if trace.exact and (root is not None or not any(ys)):
        r = root if root is not None else Fraction(1)
        b = tuple(y / r for y in ys)
        a_sq = tuple(x / d for x in zs)
    else:
        s = math.sqrt(d)
        b = tuple(float(y) / s for y in ys)
        a_sq = tuple(float(x) / d for x in zs)
    return _with(cf, jacobi=FiniteRankJacobi(b, a_sq), jacobi_scale_sq=d, free_copies=FreeCopies(None, d)), trace


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class ResidualReport:
    orthogonality: float
    three_term: float
    decoupling: float
    finite_block: float
    extension: float
    exact_zero: bool | None  # exact-mode verdict; None for float forms

    @property
    def max(self):
        return max(self.orthogonality, self.three_term, self.decoupling, self.finite_block, self.extension)

    def ok(self, tol=1e-12):
        if self.exact_zero is not None:
            return self.exact_zero and self.max <= tol
        return self.max <= tol


def _site_values(cf):
    K1 = cf.krylov_depth
    J = cf.jacobi
    # x_k sits at Jacobi site K1 - k
    b = [J.b_at(K1 - k) for k in range(K1)]
    a_sq = [J.a_sq_at(K1 - k) for k in range(1, K1)]  # coupling x_k -- x_{k-1}, k >= 1
    return b, a_sq


def verify_canonical(A, d, tail, cf, trace=None, *, d_sq=None):
    """Residuals of orthogonality, the three-term relations, decoupling and the tail extension."""
    if not isinstance(A, SymmetricMatrix):
        A = SymmetricMatrix(A)
    n = A.order
    if cf.krylov.shape[0] != n or cf.krylov_depth + cf.finite_block.order != n:
        raise ValueError("canonical form does not match the matrix dimension")
    if d_sq is None:
        d_sq = d * d if is_exact(d) else float(d) ** 2
    a = A.to_float()
    b, a_sq = _site_values(cf)
    K1 = cf.krylov_depth
    exact_zero = None
    if cf.exact and A.exact:
        rows = [list(r) for r in A.data]
        xs = [list(x) for x in cf.exact_krylov]
        cs = [list(x) for x in cf.exact_complement]
        ok = True
        allv = xs + cs
        for i in range(len(allv)):
            for j in range(i):
                if _dot(allv[i], allv[j]) != 0:
                    ok = False
        for k in range(K1):
            r = _matvec(rows, xs[k])
            r = [ri - Fraction(b[k]) * xi for ri, xi in zip(r, xs[k])]
            if k + 1 < K1:
                r = [ri - xi for ri, xi in zip(r, xs[k + 1])]
            if k >= 1:
                r = [ri - Fraction(a_sq[k - 1]) * xi for ri, xi in zip(r, xs[k - 1])]
            if any(r):
                ok = False
        for c in cs:
            ac = _matvec(rows, c)
            if any(_dot(ac, x) for x in xs):
                ok = False
        exact_zero = ok
    q = cf.krylov
    c = cf.complement
    full = np.hstack([q, c])
    orth = float(np.max(np.abs(full.T @ full - np.eye(n)))) if n else 0.0
    t = np.zeros((K1, K1))
    for k in range(K1):
        t[k, k] = float(b[k])
        if k >= 1:
            t[k, k - 1] = t[k - 1, k] = math.sqrt(float(a_sq[k - 1]))
    three = float(np.max(np.abs(a @ q - q @ t))) if K1 else 0.0
    dec = float(np.max(np.abs(c.T @ a @ q))) if c.shape[1] else 0.0
    fb = float(np.max(np.abs(c.T @ a @ c - cf.finite_block.to_float()))) if c.shape[1] else 0.0
    J = cf.jacobi
    ext = abs(float(J.a_sq_at(K1)) - float(d_sq))
    for j in range(1, tail.q + 2):
        ext = max(ext, abs(float(J.b_at(K1 + j)) - float(tail.b_at(j))))
        ext = max(ext, abs(float(J.a_sq_at(K1 + j)) - float(tail.a_sq_at(j))))
    if trace is not None and any(not zk > 0 for zk in trace.z):
        ext = max(ext, 1.0)
    return ResidualReport(orth, three, dec, fb, ext, exact_zero)


def truncated_canonical_eigenvalues(cf, n_tail):
    """Eigenvalues of the canonical form cut to match ``truncate(T, n_tail)``."""
    parts = [eig_symmetric(cf.finite_block)]
    m = cf.krylov_depth + n_tail
    s = math.sqrt(float(cf.jacobi_scale_sq))
    parts.append(s * eig_symmetric(cf.jacobi.truncated(m)))
    fc = cf.free_copies
    if fc.count and n_tail:
        free = math.sqrt(float(fc.scale_sq)) * eig_symmetric(FREE.truncated(n_tail))
        parts += [free] * fc.count
    return np.sort(np.concatenate(parts))
