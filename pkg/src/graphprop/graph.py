"""Lazy locally finite graphs over structured string labels.

A vertex label is a term ``name(arg,...)`` whose arguments are integers or
nested terms, e.g. ``v(-3)``, ``u(2,5)``, ``g(v(0),k(1),3)``.  Labels order
lexicographically on their parsed tuples, which fixes every iteration order
(and hence every pivot choice) downstream.
"""

from __future__ import annotations

import functools
import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

VertexId = str


class LabelError(ValueError):
    """Malformed or foreign vertex label."""


class DegreeBoundError(RuntimeError):
    """A vertex exceeded the declared degree bound."""


_TOK = re.compile(r"\s*(-?\d+|[A-Za-z_][A-Za-z_0-9]*|[(),])")


def parse_label(label: str) -> tuple:
    """Parse ``name(args)`` into ``(name, *args)``."""
    text = label.replace("−", "-")
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise LabelError(f"malformed vertex label {label!r}")
            break
        toks.append(m.group(1))
        pos = m.end()
    term, i = _parse_term(toks, 0, label)
    if i != len(toks):
        raise LabelError(f"trailing characters in vertex label {label!r}")
    return term


def _parse_term(toks, i, label):
    if i >= len(toks) or not re.fullmatch(r"[A-Za-z_]\w*", toks[i]):
        raise LabelError(f"malformed vertex label {label!r}")
    name = toks[i]
    i += 1
    if i >= len(toks) or toks[i] != "(":
        raise LabelError(f"malformed vertex label {label!r}")
    i += 1
    args = []
    if i < len(toks) and toks[i] == ")":
        return (name,), i + 1
    while True:
        if i >= len(toks):
            raise LabelError(f"unbalanced vertex label {label!r}")
        tok = toks[i]
        if re.fullmatch(r"-?\d+", tok):
            args.append(int(tok))
            i += 1
        else:
            sub, i = _parse_term(toks, i, label)
            args.append(sub)
        if i >= len(toks):
            raise LabelError(f"unbalanced vertex label {label!r}")
        if toks[i] == ")":
            return (name, *args), i + 1
        if toks[i] != ",":
            raise LabelError(f"malformed vertex label {label!r}")
        i += 1


def format_label(term: tuple) -> str:
    name, *args = term
    return name + "(" + ",".join(str(a) if isinstance(a, int) else format_label(a) for a in args) + ")"


def _term_key(term):
    return (term[0], tuple((0, a) if isinstance(a, int) else (1, _term_key(a)) for a in term[1:]))


@functools.lru_cache(maxsize=1 << 18)
def vertex_key(label: str):
    """Sort key: parsed tuple order; unparseable labels sort after, by text."""
    try:
        return (0, _term_key(parse_label(label)))
    except LabelError:
        return (1, label)


def sort_vertices(vertices: Iterable[VertexId]) -> list[VertexId]:
    return sorted(vertices, key=vertex_key)


@dataclass(frozen=True)
class RadialProfile:
    """Declared equitable distance partition around every vertex.

    ``intersection(k)`` gives (c_k, a_k, b_k): neighbours of a layer-k vertex
    in layers k-1, k, k+1.  ``distance`` is the graph metric.
    """

    intersection: Callable[[int], tuple[int, int, int]]
    distance: Callable[[VertexId, VertexId], int]
    layer_size: Callable[[int], int]


class Graph:
    """Immutable locally finite graph given by a neighbour function on terms.

    ``neighbors_of`` maps a parsed term to an iterable of terms; ``valid``
    rejects terms outside the family.  Finite graphs pass ``vertices``.
    """

    def __init__(
        self,
        name: str,
        neighbors_of: Callable[[tuple], Iterable[tuple]] | None,
        root: VertexId,
        *,
        degree_bound: int | None = None,
        valid: Callable[[tuple], bool] | None = None,
        vertices: Sequence[VertexId] | None = None,
        adjacency: dict | None = None,
        ray: Callable[[VertexId, int], VertexId] | None = None,
        radial: RadialProfile | None = None,
        regular: bool = False,
        params: dict | None = None,
    ):
        self.name = name
        self.root = root
        self.degree_bound = degree_bound
        self.params = dict(params or {})
        self.ray = ray
        self.radial = radial
        self.regular = regular
        self._neighbors_of = neighbors_of
        self._valid = valid
        self._adjacency = None
        self.vertices = None
        if adjacency is not None:
            self._adjacency = {v: tuple(sort_vertices(ws)) for v, ws in adjacency.items()}
            self.vertices = tuple(sort_vertices(self._adjacency))
        elif vertices is not None:
            self.vertices = tuple(sort_vertices(vertices))
        self._cache = functools.lru_cache(maxsize=1 << 17)(self._compute)

    @property
    def is_finite(self) -> bool:
        return self.vertices is not None

    def __repr__(self):
        return f"Graph({self.name!r})"

    def _compute(self, v: VertexId) -> tuple:
        if self._adjacency is not None:
            if v not in self._adjacency:
                raise LabelError(f"{v!r} is not a vertex of {self.name}")
            out = self._adjacency[v]
        else:
            term = parse_label(v)
            if self._valid is not None and not self._valid(term):
                raise LabelError(f"{v!r} is not a vertex of {self.name}")
            out = tuple(sort_vertices({format_label(t) for t in self._neighbors_of(term)}))
        if self.degree_bound is not None and len(out) > self.degree_bound:
            raise DegreeBoundError(f"deg({v}) = {len(out)} exceeds declared bound {self.degree_bound}")
        if v in out:
            raise RuntimeError(f"loop at {v} in {self.name}")
        return out

    def neighbors(self, v: VertexId) -> tuple:
        """Sorted neighbour labels of ``v``."""
        return self._cache(v)

    def degree(self, v: VertexId) -> int:
        return len(self.neighbors(v))

    def canonical(self, v: VertexId) -> VertexId:
        """Normalise spelling (e.g. unicode minus) and validate a label."""
        if self._adjacency is not None:
            if v not in self._adjacency:
                raise LabelError(f"{v!r} is not a vertex of {self.name}")
            return v
        label = format_label(parse_label(v))
        self.neighbors(label)
        return label

    def edges(self):
        """Edge list of a finite graph, each edge once, sorted."""
        if not self.is_finite:
            raise TypeError(f"{self.name} is infinite")
        out = []
        for v in self.vertices:
            for w in self.neighbors(v):
                if vertex_key(v) < vertex_key(w):
                    out.append((v, w))
        return out


def neighbors(graph: Graph, v: VertexId) -> list[VertexId]:
    return list(graph.neighbors(v))


def finite_graph(name: str, edges: Iterable[tuple[VertexId, VertexId]], vertices=(), **kw) -> Graph:
    adj: dict[str, set] = {v: set() for v in vertices}
    for a, b in edges:
        if a == b:
            raise ValueError(f"loop at {a}")
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    if not adj:
        raise ValueError("empty graph")
    degs = [len(s) for s in adj.values()]
    kw.setdefault("degree_bound", max(degs))
    kw.setdefault("regular", len(set(degs)) == 1)
    root = kw.pop("root", None) or sort_vertices(adj)[0]
    return Graph(name, None, root, adjacency=adj, **kw)


def load_edge_list(path: str) -> Graph:
    """Load a finite graph from JSON ``{"name":..., "vertices": [...], "edges": [[a,b],...]}``."""
    with open(path) as fh:
        data = json.load(fh)
    return finite_graph(data.get("name", path), [tuple(e) for e in data["edges"]], data.get("vertices", ()))


@dataclass(frozen=True)
class FiniteBall:
    center: VertexId
    radius: int
    interior: tuple
    closure: tuple
    adjacency: dict = field(repr=False)
    distance: dict = field(repr=False)

    def closure_edges(self) -> list[tuple[VertexId, VertexId]]:
        out = []
        for v in self.closure:
            for w in self.adjacency[v]:
                if vertex_key(v) < vertex_key(w):
                    out.append((v, w))
        return out

    def to_json(self) -> dict:
        return {
            "center": self.center,
            "radius": self.radius,
            "interior": list(self.interior),
            "closure_edges": [list(e) for e in self.closure_edges()],
        }

    def to_dot(self) -> str:
        lines = ["graph ball {"]
        for v in self.closure:
            shape = "doublecircle" if v == self.center else ("circle" if v in self.distance else "point")
            lines.append(f'  "{v}" [shape={shape}];')
        for a, b in self.closure_edges():
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def bfs_layers(graph: Graph, v: VertexId, r: int) -> dict[VertexId, int]:
    """Distances from ``v`` for every vertex within ``r``."""
    dist = {v: 0}
    frontier = [v]
    for k in range(1, r + 1):
        nxt = []
        for u in frontier:
            for w in graph.neighbors(u):
                if w not in dist:
                    dist[w] = k
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return dist


def ball(graph: Graph, v: VertexId, r: int) -> FiniteBall:
    if r < 0:
        raise ValueError("radius must be >= 0")
    v = graph.canonical(v)
    dist = bfs_layers(graph, v, r)
    interior = set(dist)
    closure = set(interior)
    for u in interior:
        closure.update(graph.neighbors(u))
    adjacency = {u: tuple(w for w in graph.neighbors(u) if w in closure) for u in closure}
    return FiniteBall(
        center=v,
        radius=r,
        interior=tuple(sort_vertices(interior)),
        closure=tuple(sort_vertices(closure)),
        adjacency=adjacency,
        distance=dist,
    )


def boundary(graph: Graph, X: Iterable[VertexId]) -> list[VertexId]:
    """Gamma(X) minus X, sorted."""
    X = set(X)
    out = set()
    for u in X:
        out.update(graph.neighbors(u))
    return sort_vertices(out - X)


def gamma2_components(graph: Graph, X: Iterable[VertexId]) -> list[list[VertexId]]:
    """Blocks of X under 'Gamma-distance at most 2', each sorted, ordered by first element."""
    X = sort_vertices(set(X))
    members = set(X)
    parent = {x: x for x in X}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in X:
        reach = set(graph.neighbors(x))
        for w in list(reach):
            reach.update(graph.neighbors(w))
        for y in reach:
            if y in members:
                ra, rb = find(x), find(y)
                if ra != rb:
                    parent[rb] = ra
    blocks: dict[str, list] = {}
    for x in X:
        blocks.setdefault(find(x), []).append(x)
    return sorted(blocks.values(), key=lambda b: vertex_key(b[0]))


def check_symmetry(graph: Graph, sample: Iterable[VertexId]) -> None:
    """Raise AssertionError unless adjacency is symmetric and loop-free on ``sample``."""
    for v in sample:
        nb = graph.neighbors(v)
        assert v not in nb, f"loop at {v}"
        assert list(nb) == sort_vertices(nb), f"unsorted neighbours at {v}"
        for w in nb:
            assert v in graph.neighbors(w), f"{w} ~ {v} not symmetric"


def sample_vertices(graph: Graph, n: int, start: Optional[VertexId] = None) -> list[VertexId]:
    """First ``n`` vertices in BFS order from ``start`` (deterministic)."""
    start = start or graph.root
    seen = [start]
    index = {start}
    q = deque([start])
    while q and len(seen) < n:
        u = q.popleft()
        for w in graph.neighbors(u):
            if w not in index:
                index.add(w)
                seen.append(w)
                q.append(w)
                if len(seen) >= n:
                    break
    return seen
