"""Finite weighted graphs, tail attachments, truncations and generators.

Vertices are labelled ``1..n``. Generators emit exact rational weights and
follow a fixed labelling per family (see :func:`gen`); by convention the
vertex a tail is attached to is the highest label, see
:func:`default_attachment`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .rational import format_rational, is_exact, parse_rational


class GraphError(ValueError):
    """Invalid graph data or generator parameters."""


class SymmetricMatrix:
    """Immutable real symmetric matrix, exact (``Fraction``) or float."""

    __slots__ = ("_data",)

    def __init__(self, rows, exact=None):
        rows = list(rows) if not isinstance(rows, np.ndarray) else rows
        if exact is None:
            exact = all(is_exact(x) for row in rows for x in row)
        if exact:
            data = np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
        else:
            data = np.array(rows, dtype=float)
        if data.size == 0:
            data = data.reshape(0, 0)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise GraphError("matrix must be square")
        if not np.array_equal(data, data.T):
            raise GraphError("matrix is not symmetric")
        data.setflags(write=False)
        self._data = data

    @property
    def order(self):
        return self._data.shape[0]

    @property
    def exact(self):
        return self._data.dtype == object

    @property
    def data(self):
        return self._data

    def __getitem__(self, ij):
        return self._data[ij]

    def to_float(self):
        return np.array(self._data, dtype=float)

    def as_float(self):
        return self if not self.exact else SymmetricMatrix(self.to_float(), exact=False)

    def as_exact(self):
        if self.exact:
            return self
        return SymmetricMatrix([[Fraction(float(x)) for x in row] for row in self._data], exact=True)

    def __eq__(self, other):
        return isinstance(other, SymmetricMatrix) and np.array_equal(self._data, other._data)

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"SymmetricMatrix(order={self.order}, {kind})"


@dataclass(frozen=True)
class WeightedGraph:
    """Finite simple graph with positive edge weights on vertices ``1..order``."""

    order: int
    edges: tuple  # sorted tuple of (i, j, weight) with i < j

    def __post_init__(self):
        if self.order < 1:
            raise GraphError("graph needs at least one vertex")
        seen = set()
        norm = []
        for i, j, w in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.order and 1 <= j <= self.order):
                raise GraphError(f"edge {{{i}, {j}}} out of range 1..{self.order}")
            if not w > 0:
                raise GraphError(f"edge {{{i}, {j}}} has nonpositive weight {w}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            norm.append((key[0], key[1], w))
        object.__setattr__(self, "edges", tuple(sorted(norm, key=lambda e: e[:2])))

    @classmethod
    def from_edges(cls, order, edges, weight=1):
        out = []
        for e in edges:
            if len(e) == 2:
                out.append((e[0], e[1], parse_rational(weight)))
            else:
                w = e[2]
                out.append((e[0], e[1], w if isinstance(w, float) else parse_rational(w)))
        return cls(order, tuple(out))

    @property
    def exact(self):
        return all(is_exact(w) for _, _, w in self.edges)

    def weight(self, i, j):
        a, b = min(i, j), max(i, j)
        for u, v, w in self.edges:
            if (u, v) == (a, b):
                return w
        return 0

    def adjacency(self, exact=None):
        exact = self.exact if exact is None else exact
        zero = Fraction(0) if exact else 0.0
        rows = [[zero] * self.order for _ in range(self.order)]
        for i, j, w in self.edges:
            w = Fraction(w) if exact else float(w)
            rows[i - 1][j - 1] = w
            rows[j - 1][i - 1] = w
        return SymmetricMatrix(rows, exact=exact)


@dataclass(frozen=True)
class TailAttachment:
    """``rays`` copies of a (weighted) infinite path joined to ``vertex``.

    ``tail_weights`` maps edge index ``j >= 1`` (edge between tail vertices
    ``j`` and ``j + 1``) to its weight; unlisted edges have weight 1.
    """

    vertex: int
    rays: int = 1
    bridge: object = Fraction(1)
    tail_weights: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        if self.rays < 1:
            raise GraphError("ray count must be at least 1")
        if not self.bridge > 0:
            raise GraphError("bridge weight must be positive")
        tw = {}
        for k, w in dict(self.tail_weights).items():
            k = int(k)
            if k < 1:
                raise GraphError(f"tail edge index {k} must be >= 1")
            if not w > 0:
                raise GraphError(f"tail edge {k} has nonpositive weight")
            if w != 1:
                tw[k] = w
        object.__setattr__(self, "tail_weights", MappingProxyType(dict(sorted(tw.items()))))

    @property
    def unweighted(self):
        return not self.tail_weights

    @property
    def tail_rank(self):
        """Last tail edge index that differs from 1 (0 for a free tail)."""
        return max(self.tail_weights, default=0)

    def tail_weight(self, j):
        return self.tail_weights.get(j, 1)


@dataclass(frozen=True)
class TailedGraph:
    base: WeightedGraph
    attachments: tuple

    @property
    def total_rays(self):
        return sum(a.rays for a in self.attachments)

    @property
    def attachment_vertices(self):
        return sorted({a.vertex for a in self.attachments})

    @property
    def exact(self):
        return self.base.exact and all(
            is_exact(a.bridge) and all(is_exact(w) for w in a.tail_weights.values())
            for a in self.attachments
        )


def attach_tails(graph, attachments):
    """Couple ``graph`` with tails; no matrix is built."""
    attachments = tuple(attachments)
    if not attachments:
        raise GraphError("at least one tail required")
    for a in attachments:
        if not isinstance(a, TailAttachment):
            raise TypeError("attachments must be TailAttachment records")
        if not 1 <= a.vertex <= graph.order:
            raise GraphError(f"attachment vertex {a.vertex} out of range 1..{graph.order}")
    return TailedGraph(graph, attachments)


def _rays(tg):
    for a in tg.attachments:
        for _ in range(a.rays):
            yield a


def truncate(tg, n_tail, exact=None):
    """Adjacency matrix with every ray cut after ``n_tail`` vertices.

    Ordering: base vertices ``1..n`` first, then tail vertices generation by
    generation, rays in attachment order within a generation. ``n_tail = 0``
    gives the bare base graph.
    """
    if n_tail < 0:
        raise GraphError("tail length must be nonnegative")
    exact = tg.exact if exact is None else exact
    conv = Fraction if exact else float
    rays = list(_rays(tg))
    n, r = tg.base.order, len(rays)
    m = n + n_tail * r
    zero = conv(0)
    rows = [[zero] * m for _ in range(m)]
    for i, j, w in tg.base.edges:
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = conv(w)

    def idx(g, k):  # generation g >= 1, ray k >= 0
        return n + (g - 1) * r + k

    for k, a in enumerate(rays):
        if n_tail >= 1:
            rows[a.vertex - 1][idx(1, k)] = rows[idx(1, k)][a.vertex - 1] = conv(a.bridge)
        for g in range(1, n_tail):
            w = conv(a.tail_weight(g))
            rows[idx(g, k)][idx(g + 1, k)] = rows[idx(g + 1, k)][idx(g, k)] = w
    return SymmetricMatrix(rows, exact=exact)


@dataclass(frozen=True)
class ChainTruncation:
    """Truncation as a dense base block plus pendant tridiagonal chains.

    Holds the same operator as :func:`truncate` in a different vertex order
    (each ray contiguous), which is what the structured eigen-counts use.
    """

    base: np.ndarray
    chain_vertex: np.ndarray  # 0-based base vertex per chain
    chain_ptr: np.ndarray
    chain_d: np.ndarray
    chain_e2: np.ndarray  # [bridge^2, a_1^2, ...] per chain

    @property
    def dimension(self):
        return self.base.shape[0] + int(self.chain_ptr[-1])

    def to_dense(self):
        n = self.base.shape[0]
        m = self.dimension
        out = np.zeros((m, m))
        out[:n, :n] = self.base
        for c, v in enumerate(self.chain_vertex):
            s, e = self.chain_ptr[c], self.chain_ptr[c + 1]
            for i in range(s, e):
                out[n + i, n + i] = self.chain_d[i]
                w = np.sqrt(self.chain_e2[i])
                prev = v if i == s else n + i - 1
                out[prev, n + i] = out[n + i, prev] = w
        return out


def chain_truncation(tg, n_tail):
    rays = list(_rays(tg))
    base = tg.base.adjacency(exact=False).to_float()
    ptr = np.arange(len(rays) + 1, dtype=np.int_) * n_tail
    d = np.zeros(len(rays) * n_tail)
    e2 = np.zeros(len(rays) * n_tail)
    for k, a in enumerate(rays):
        if n_tail == 0:
            continue
        e2[k * n_tail] = float(a.bridge) ** 2
        for g in range(1, n_tail):
            e2[k * n_tail + g] = float(a.tail_weight(g)) ** 2
    verts = np.array([a.vertex - 1 for a in rays], dtype=np.int_)
    return ChainTruncation(base, verts, ptr, d, e2)


# ---------------------------------------------------------------- generators


def _need(cond, msg):
    if not cond:
        raise GraphError(msg)


def _path(m):
    _need(m >= 1, "path needs m >= 1")
    return WeightedGraph.from_edges(m, [(i, i + 1) for i in range(1, m)])


def _cycle(m):
    _need(m >= 3, "cycle needs m >= 3")
    return WeightedGraph.from_edges(m, [(i, i + 1) for i in range(1, m)] + [(m, 1)])


def _star(n):
    _need(n >= 1, "star needs n >= 1 leaves")
    return WeightedGraph.from_edges(n + 1, [(k, n + 1) for k in range(1, n + 1)])


def _weighted_star(weights):
    weights = [parse_rational(w) if not isinstance(w, float) else w for w in weights]
    _need(len(weights) >= 1, "weighted star needs at least one weight")
    n = len(weights)
    return WeightedGraph(n + 1, tuple((k, n + 1, w) for k, w in enumerate(weights, 1)))


def _multiple_star(n, p):
    _need(n >= 1 and p >= 1, "multiple star needs n >= 1 rays of p >= 1 vertices")
    root = p * n + 1
    edges = [((i - 1) * n + q, i * n + q) for i in range(1, p) for q in range(1, n + 1)]
    edges += [((p - 1) * n + q, root) for q in range(1, n + 1)]
    return WeightedGraph.from_edges(root, edges)


def _complete_bipartite(p, q):
    _need(p >= 1 and q >= 1, "complete bipartite needs p, q >= 1")
    return WeightedGraph.from_edges(p + q, [(i, j) for i in range(1, p + 1) for j in range(p + 1, p + q + 1)])


def _wheel(n):
    _need(n >= 3, "wheel needs n >= 3")
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    edges += [(k, n + 1) for k in range(1, n + 1)]
    return WeightedGraph.from_edges(n + 1, edges)


def _sword():
    return WeightedGraph.from_edges(6, [(1, 6), (2, 3), (3, 6), (4, 5), (5, 6)])


def _umbrella():
    return WeightedGraph.from_edges(5, [(1, 2), (2, 3), (3, 4), (1, 5), (2, 5), (3, 5), (4, 5)])


def _propeller(n):
    _need(n >= 1, "propeller needs n >= 1")
    hub = 4 * n + 1
    edges = [(i, i + 1) for i in range(1, 2 * n)] + [(hub, 1), (2 * n, hub)]
    edges += [(i, i + 1) for i in range(2 * n + 1, 4 * n)] + [(hub, 2 * n + 1), (4 * n, hub)]
    return WeightedGraph.from_edges(hub, edges)


_GENERATORS = {
    "path": (_path, ("m",)),
    "cycle": (_cycle, ("m",)),
    "star": (_star, ("n",)),
    "weighted_star": (_weighted_star, ("weights",)),
    "multiple_star": (_multiple_star, ("n", "p")),
    "complete_bipartite": (_complete_bipartite, ("p", "q")),
    "wheel": (_wheel, ("n",)),
    "sword": (_sword, ()),
    "umbrella": (_umbrella, ()),
    "propeller": (_propeller, ("n",)),
}

GRAPH_KINDS = tuple(_GENERATORS)


def gen(kind, **params):
    """Build a named example graph.

    Labelling per kind (tails go on the last vertex, see
    :func:`default_attachment`):

    * ``path(m)``: ``1 - 2 - ... - m``.
    * ``cycle(m)``: ``1 - 2 - ... - m - 1``, ``m >= 3`` (the kite base).
    * ``star(n)``: leaves ``1..n``, root ``n + 1``.
    * ``weighted_star(weights)``: edge ``(k, n + 1)`` has weight ``weights[k-1]``.
    * ``multiple_star(n, p)``: ``n`` rays of ``p`` vertices; ray ``q`` is
      ``q, n + q, ..., (p - 1)n + q`` with ``(p - 1)n + q`` next to root ``pn + 1``.
    * ``complete_bipartite(p, q)``: parts ``1..p`` and ``p+1..p+q``.
    * ``wheel(n)``: rim cycle ``1..n``, hub ``n + 1``.
    * ``sword``: T(1,2,2) with centre 6 and arms ``1``, ``3-2``, ``5-4``.
    * ``umbrella``: path ``1-2-3-4`` all joined to hub 5.
    * ``propeller(n)``: cycles ``hub,1..2n`` and ``hub,2n+1..4n``, hub ``4n+1``.
    """
    try:
        fn, names = _GENERATORS[kind]
    except KeyError:
        raise GraphError(f"unknown graph kind {kind!r}; choose from {', '.join(GRAPH_KINDS)}") from None
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise GraphError(f"{kind} takes parameters {names}, got {tuple(params)}")
    return fn(*(params[k] for k in names))


def default_attachment(graph):
    return graph.order


# ---------------------------------------------------------------- graph-spec I/O


def _num_text(w):
    return format_rational(w) if is_exact(w) else repr(float(w))


def graph_spec_dict(tg):
    return {
        "order": tg.base.order,
        "edges": [[i, j, _num_text(w)] for i, j, w in tg.base.edges],
        "tails": [
            {
                "vertex": a.vertex,
                "rays": a.rays,
                "bridge": _num_text(a.bridge),
                "tail_weights": {str(k): _num_text(w) for k, w in a.tail_weights.items()},
            }
            for a in tg.attachments
        ],
    }


def dump_graph_spec(tg):
    return json.dumps(graph_spec_dict(tg), indent=2) + "\n"


def graph_from_spec_dict(doc, require_tails=True):
    try:
        order = int(doc["order"])
        edges = []
        for e in doc.get("edges", []):
            if len(e) not in (2, 3):
                raise GraphError(f"edge entry {e!r} must be [i, j] or [i, j, weight]")
            w = parse_rational(e[2]) if len(e) == 3 else Fraction(1)
            edges.append((int(e[0]), int(e[1]), w))
        base = WeightedGraph(order, tuple(edges))
        tails = []
        for t in doc.get("tails", []):
            tails.append(
                TailAttachment(
                    vertex=int(t["vertex"]),
                    rays=int(t.get("rays", 1)),
                    bridge=parse_rational(t.get("bridge", 1)),
                    tail_weights=MappingProxyType(
                        {int(k): parse_rational(v) for k, v in t.get("tail_weights", {}).items()}
                    ),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"malformed graph spec: {exc}") from exc
    if not tails and not require_tails:
        return TailedGraph(base, ())
    return attach_tails(base, tails)


def load_graph_spec(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph spec is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphError("graph spec must be a JSON object")
    return graph_from_spec_dict(doc)
