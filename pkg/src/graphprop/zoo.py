"""Named graph families with their expected behaviour and closed-form oracles."""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional

from graphprop.fields import ComplexApprox, Field, NumberField, PrimeField, Rationals
from graphprop.graph import (
    Graph,
    LabelError,
    RadialProfile,
    finite_graph,
    format_label,
    load_edge_list,
    parse_label,
)


class ZooError(ValueError):
    """Unknown family or invalid parameters."""


def _is_prime(n):
    return n >= 2 and all(n % k for k in range(2, isqrt(n) + 1))


def _int_args(term, name, n):
    return term[0] == name and len(term) == n + 1 and all(isinstance(a, int) for a in term[1:])


# ---------------------------------------------------------------- finite


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ZooError("K_n needs n >= 1")
    verts = [f"k({i})" for i in range(n)]
    edges = [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)]
    return finite_graph(f"K{n}", edges, verts, params={"n": n})


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ZooError("P_n needs n >= 1")
    verts = [f"n({i})" for i in range(n)]
    return finite_graph(f"P{n}", list(zip(verts, verts[1:])), verts, params={"n": n})


def petersen() -> Graph:
    edges = []
    for i in range(5):
        edges.append((f"p({i})", f"p({(i + 1) % 5})"))
        edges.append((f"p({i})", f"p({i + 5})"))
        edges.append((f"p({i + 5})", f"p({(i + 2) % 5 + 5})"))
    return finite_graph("petersen", edges)


DELTA82_EDGES = [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
DELTA83_EDGES = [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 6), (4, 5), (5, 6)]
BLOCK16_EDGES = [
    (1, 3), (2, 4), (3, 5), (3, 6), (4, 7), (4, 8), (5, 8), (5, 9), (6, 7), (6, 9), (7, 10),
    (8, 11), (9, 12), (10, 13), (10, 14), (11, 12), (11, 15), (12, 13), (13, 16), (14, 15),
    (14, 16), (15, 16),
]


def delta82() -> Graph:
    return finite_graph("delta82", [(f"u({a})", f"u({b})") for a, b in DELTA82_EDGES])


def delta83() -> Graph:
    return finite_graph("delta83", [(f"u({a})", f"u({b})") for a, b in DELTA83_EDGES])


def delta83_check() -> Graph:
    """The 6-vertex block with a pendant vertex at each end: v(0)-u(1), v(1)-u(6)."""
    edges = [(f"u({a})", f"u({b})") for a, b in DELTA83_EDGES]
    edges += [("v(0)", "u(1)"), ("v(1)", "u(6)")]
    return finite_graph("delta83_check", edges)


# ---------------------------------------------------------------- infinite


def chain() -> Graph:
    def nb(t):
        i = t[1]
        return [("v", i - 1), ("v", i + 1)]

    radial = RadialProfile(
        intersection=lambda k: (0, 0, 2) if k == 0 else (1, 0, 1),
        distance=lambda a, b: abs(parse_label(a)[1] - parse_label(b)[1]),
        layer_size=lambda k: 1 if k == 0 else 2,
    )
    return Graph(
        "chain",
        nb,
        "v(0)",
        degree_bound=2,
        valid=lambda t: _int_args(t, "v", 1),
        ray=lambda v, k: format_label(("v", parse_label(v)[1] + k)),
        radial=radial,
        regular=True,
    )


def tree(d: int) -> Graph:
    """d-regular tree; root t(), root children t(0..d-1), deeper children 0..d-2."""
    if d < 2:
        raise ZooError("tree needs d >= 2")

    def valid(t):
        if t[0] != "t" or not all(isinstance(a, int) for a in t[1:]):
            return False
        path = t[1:]
        return not path or (0 <= path[0] < d and all(0 <= a < d - 1 for a in path[1:]))

    def nb(t):
        path = t[1:]
        out = [("t", *path, c) for c in range(d if not path else d - 1)]
        if path:
            out.append(("t", *path[:-1]))
        return out

    def distance(a, b):
        pa, pb = parse_label(a)[1:], parse_label(b)[1:]
        common = 0
        for x, y in zip(pa, pb):
            if x != y:
                break
            common += 1
        return len(pa) + len(pb) - 2 * common

    radial = RadialProfile(
        intersection=lambda k: (0, 0, d) if k == 0 else (1, 0, d - 1),
        distance=distance,
        layer_size=lambda k: 1 if k == 0 else d * (d - 1) ** (k - 1),
    )
    return Graph(
        f"tree{d}",
        nb,
        "t()",
        degree_bound=d,
        valid=valid,
        ray=lambda v, k: format_label(parse_label(v) + (0,) * k),
        radial=radial,
        regular=True,
        params={"d": d},
    )


def grid2d() -> Graph:
    def nb(t):
        _, i, j = t
        return [("z", i - 1, j), ("z", i + 1, j), ("z", i, j - 1), ("z", i, j + 1)]

    def ray(v, k):
        _, i, j = parse_label(v)
        return format_label(("z", i + k, j))

    return Graph("grid2d", nb, "z(0,0)", degree_bound=4, valid=lambda t: _int_args(t, "z", 2), ray=ray, regular=True)


def _block_adjacency(edges):
    adj: dict[int, list] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def delta_chain_82() -> Graph:
    """Five-vertex blocks u(i,1..5) hung from a chain v(i) through u(i,1)."""
    adj = _block_adjacency(DELTA82_EDGES)

    def valid(t):
        return (_int_args(t, "u", 2) and 1 <= t[2] <= 5) or _int_args(t, "v", 1)

    def nb(t):
        if t[0] == "v":
            i = t[1]
            return [("v", i - 1), ("v", i + 1), ("u", i, 1)]
        _, i, j = t
        out = [("u", i, k) for k in adj[j]]
        if j == 1:
            out.append(("v", i))
        return out

    return Graph("delta_chain_82", nb, "v(0)", degree_bound=3, valid=valid, regular=True)


def cubic_83() -> Graph:
    """Six-vertex blocks u(i,1..6) joined in a line by u(i,6)-u(i+1,1)."""
    adj = _block_adjacency(DELTA83_EDGES)

    def nb(t):
        _, i, j = t
        out = [("u", i, k) for k in adj[j]]
        if j == 6:
            out.append(("u", i + 1, 1))
        if j == 1:
            out.append(("u", i - 1, 6))
        return out

    return Graph(
        "cubic_83",
        nb,
        "u(0,1)",
        degree_bound=3,
        valid=lambda t: _int_args(t, "u", 2) and 1 <= t[2] <= 6,
        regular=True,
    )


def blocks16_84() -> Graph:
    """Sixteen-vertex blocks joined by two rails u(i,1)-u(i+1,1), u(i,2)-u(i+1,2)."""
    adj = _block_adjacency(BLOCK16_EDGES)

    def nb(t):
        _, i, j = t
        out = [("u", i, k) for k in adj[j]]
        if j in (1, 2):
            out += [("u", i - 1, j), ("u", i + 1, j)]
        return out

    return Graph(
        "blocks16_84",
        nb,
        "u(0,1)",
        degree_bound=3,
        valid=lambda t: _int_args(t, "u", 2) and 1 <= t[2] <= 16,
        regular=True,
    )


def blowup(base: Graph, p: int, *, name="blowup_p", internal_edge=False) -> Graph:
    """Replace each base vertex x by copies b(x,1..p); copies over adjacent base
    vertices are all joined.  ``internal_edge`` (p = 2 only) joins the two copies."""

    def valid(t):
        if t[0] != "b" or len(t) != 3 or not isinstance(t[1], tuple) or not isinstance(t[2], int):
            return False
        if not 1 <= t[2] <= p:
            return False
        try:
            base.neighbors(format_label(t[1]))
        except LabelError:
            return False
        return True

    def nb(t):
        _, x, k = t
        out = []
        for y in base.neighbors(format_label(x)):
            ty = parse_label(y)
            out.extend(("b", ty, c) for c in range(1, p + 1))
        if internal_edge:
            out.append(("b", x, 3 - k))
        return out

    bound = None if base.degree_bound is None else p * base.degree_bound + (1 if internal_edge else 0)
    return Graph(
        name,
        nb,
        f"b({base.root},1)",
        degree_bound=bound,
        valid=valid,
        regular=base.regular,
        params={"p": p, "base": base.name},
    )


def blowup_p(p: int, base: Optional[Graph] = None) -> Graph:
    if not _is_prime(p):
        raise ZooError(f"blowup_p needs a prime p, got {p}")
    return blowup(base or chain(), p)


def twin_vertex(base: Optional[Graph] = None) -> Graph:
    """Two non-adjacent copies with equal neighbourhoods."""
    return blowup(base or chain(), 2, name="twin_vertex")


def twin_edge(base: Optional[Graph] = None) -> Graph:
    """Two adjacent copies whose other neighbours coincide."""
    return blowup(base or chain(), 2, name="twin_edge", internal_edge=True)


def parity_blowup_p(p: int) -> Graph:
    """v(i,k): v(2i,*) fully joined to v(2i+1,*); v(2i,k) joined to v(2i-1,k)."""
    if not _is_prime(p):
        raise ZooError(f"parity_blowup_p needs a prime p, got {p}")

    def nb(t):
        _, i, k = t
        if i % 2 == 0:
            return [("v", i + 1, c) for c in range(1, p + 1)] + [("v", i - 1, k)]
        return [("v", i - 1, c) for c in range(1, p + 1)] + [("v", i + 1, k)]

    return Graph(
        "parity_blowup_p",
        nb,
        "v(0,1)",
        degree_bound=p + 1,
        valid=lambda t: _int_args(t, "v", 2) and 1 <= t[2] <= p,
        regular=True,
        params={"p": p},
    )


def vsym_851(base: Optional[Graph] = None, fiber: Optional[Graph] = None) -> Graph:
    """g(x,y,j), x in base, y in the finite fiber, j in 1..4.

    Base edges join all (y, j) over adjacent x; within one x, layers j, j'
    with |j - j'| in {1, 3} are fully joined; within one (x, j) the fiber
    edges are copied.
    """
    base = base or chain()
    fiber = fiber or complete_graph(3)
    if not fiber.is_finite:
        raise ZooError("vsym_851 needs a finite fiber")
    fverts = [parse_label(y) for y in fiber.vertices]

    def valid(t):
        if t[0] != "g" or len(t) != 4 or not isinstance(t[3], int) or not 1 <= t[3] <= 4:
            return False
        if not isinstance(t[1], tuple) or not isinstance(t[2], tuple):
            return False
        try:
            base.neighbors(format_label(t[1]))
        except LabelError:
            return False
        return format_label(t[2]) in fiber.vertices

    def nb(t):
        _, x, y, j = t
        out = []
        for xb in base.neighbors(format_label(x)):
            tx = parse_label(xb)
            out.extend(("g", tx, fy, jj) for fy in fverts for jj in range(1, 5))
        for jj in range(1, 5):
            if abs(j - jj) in (1, 3):
                out.extend(("g", x, fy, jj) for fy in fverts)
        out.extend(("g", x, parse_label(yy), j) for yy in fiber.neighbors(format_label(y)))
        return out

    nf = len(fverts)
    fdeg = fiber.degree_bound or 0
    bound = None if base.degree_bound is None else base.degree_bound * 4 * nf + 2 * nf + fdeg
    return Graph(
        "vsym_851",
        nb,
        f"g({base.root},{fiber.vertices[0]},1)",
        degree_bound=bound,
        valid=valid,
        regular=base.regular and fiber.regular,
        params={"base": base.name, "fiber": fiber.name},
    )


def remark81(block: Optional[Graph] = None, u: str = "u(1)") -> Graph:
    """Copies d(i,y) of a finite block joined at y = u to a chain v(i)."""
    block = block or delta82()
    if not block.is_finite:
        raise ZooError("remark81 needs a finite block")
    if u not in block.vertices:
        raise ZooError(f"{u!r} is not a vertex of {block.name}")

    def valid(t):
        if _int_args(t, "v", 1):
            return True
        return (
            t[0] == "d" and len(t) == 3 and isinstance(t[1], int) and isinstance(t[2], tuple)
            and format_label(t[2]) in block.vertices
        )

    def nb(t):
        if t[0] == "v":
            i = t[1]
            return [("v", i - 1), ("v", i + 1), ("d", i, parse_label(u))]
        _, i, y = t
        out = [("d", i, parse_label(z)) for z in block.neighbors(format_label(y))]
        if format_label(y) == u:
            out.append(("v", i))
        return out

    bound = max(3, (block.degree_bound or 0) + 1)
    return Graph("remark81", nb, "v(0)", degree_bound=bound, valid=valid, params={"block": block.name, "u": u})


# ---------------------------------------------------------------- registry


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise ZooError(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except (TypeError, ValueError):
        raise ZooError(f"parameter {key!r} must be an integer") from None


def _sub(params, key, default):
    val = params.get(key, default)
    return val if isinstance(val, Graph) else make_graph(val)


_FAMILIES: dict[str, Callable[[dict], Graph]] = {
    "chain": lambda p: chain(),
    "tree": lambda p: tree(_int(p, "d", 3)),
    "grid2d": lambda p: grid2d(),
    "delta_chain_82": lambda p: delta_chain_82(),
    "cubic_83": lambda p: cubic_83(),
    "blocks16_84": lambda p: blocks16_84(),
    "blowup_p": lambda p: blowup_p(_int(p, "p", 3), _sub(p, "base", "chain")),
    "parity_blowup_p": lambda p: parity_blowup_p(_int(p, "p", 3)),
    "vsym_851": lambda p: vsym_851(_sub(p, "base", "chain"), _sub(p, "fiber", "K3")),
    "remark81": lambda p: remark81(_sub(p, "block", "delta82"), p.get("u", "u(1)")),
    "twin_edge": lambda p: twin_edge(_sub(p, "base", "chain")),
    "twin_vertex": lambda p: twin_vertex(_sub(p, "base", "chain")),
    "K": lambda p: complete_graph(_int(p, "n")),
    "P": lambda p: path_graph(_int(p, "n")),
    "petersen": lambda p: petersen(),
    "delta82": lambda p: delta82(),
    "delta83": lambda p: delta83(),
    "delta83_check": lambda p: delta83_check(),
}


def split_params(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if cur:
        out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def parse_graph_spec(spec: str) -> tuple[str, dict]:
    name, _, rest = spec.strip().partition(":")
    m = re.fullmatch(r"([KP])(\d+)", name)
    if m:
        return m.group(1), {"n": int(m.group(2))}
    if name == "file":
        return "file", {"path": rest}
    m = re.fullmatch(r"tree(\d+)", name)
    if m:
        return "tree", {"d": int(m.group(1))}
    params = {}
    for item in split_params(rest):
        key, eq, val = item.partition("=")
        if not eq:
            raise ZooError(f"parameter {item!r} is not key=value")
        params[key.strip()] = val.strip()
    return name, params


def make_graph(name, params: Optional[dict] = None) -> Graph:
    """Build a family member, e.g. ``make_graph("tree", {"d": 3})`` or
    ``make_graph("blowup_p:p=3,base=chain")``."""
    if params is None:
        name, params = parse_graph_spec(name)
    if name == "file":
        graph = load_edge_list(params["path"])
        graph.params["spec"] = f"file:{params['path']}"
        return graph
    try:
        builder = _FAMILIES[name]
    except KeyError:
        raise ZooError(f"unknown graph family {name!r}") from None
    graph = builder(dict(params))
    graph.params["spec"] = graph_spec_string(name, params)
    return graph


def graph_spec_string(name: str, params: dict) -> str:
    """Inverse of :func:`parse_graph_spec` (used to tag certificates)."""
    if not params:
        return name
    items = ",".join(f"{k}={v.params.get('spec', v.name) if isinstance(v, Graph) else v}"
                     for k, v in sorted(params.items()))
    return f"{name}:{items}"


@dataclass
class ZooEntry:
    name: str
    params: dict
    notes: list[str]
    origin: str
    oracle: Optional[Callable] = None
    graph: Graph = field(default=None, repr=False)

    def __post_init__(self):
        if self.graph is None:
            self.graph = make_graph(self.name, self.params)


def zoo_entries() -> list[ZooEntry]:
    return [
        ZooEntry("chain", {}, ["no vertex is Singular or Local for real lambda with |lambda| > 2 over Q",
                               "eigenfunctions c1 a^i + c2 b^i exist for every lambda"],
                 "bi-infinite path", oracle=chain_green_closed_form),
        ZooEntry("tree", {"d": 3}, ["Green's function radial; used for series/resolvent agreement"],
                 "regular tree (test family)"),
        ZooEntry("grid2d", {}, ["square lattice (test family)"], "Z^2"),
        ZooEntry("blowup_p", {"p": 3, "base": "chain"},
                 ["GF(3), lambda != 0: no eigenvalue, every vertex Local"],
                 "p twin copies of a vertex-symmetric graph"),
        ZooEntry("parity_blowup_p", {"p": 3}, ["GF(3), lambda = 0: no eigenvalue, every vertex Local"],
                 "alternating full/matching joins of p-element fibres"),
        ZooEntry("delta_chain_82", {},
                 ["nf:x^3-x^2-6x+2, lambda = alpha: no eigenvalue, every vertex Local",
                  "Aut has 4 vertex orbits"],
                 "five-vertex blocks hanging from a chain"),
        ZooEntry("cubic_83", {},
                 ["nf:x^3+x^2-1, lambda = alpha: no eigenvalue, every vertex Local",
                  "finite-support propagator vanishes far away"],
                 "six-vertex blocks in a line, cubic"),
        ZooEntry("blocks16_84", {}, ["Q, lambda = 0: no eigenvalue, every vertex Local",
                                     "vertex and edge connectivity 2"],
                 "sixteen-vertex blocks on two rails, cubic"),
        ZooEntry("vsym_851", {"base": "chain", "fiber": "K3"},
                 ["Q, lambda = -1: every vertex Singular (finite eigenfunction on two layers)"],
                 "layered product of a vertex-symmetric graph with a finite one"),
        ZooEntry("remark81", {"block": "delta82", "u": "u(1)"},
                 ["isomorphic to delta_chain_82"], "generic block-on-chain scheme"),
        ZooEntry("twin_edge", {"base": "chain"}, ["lambda = -1: every vertex Singular"], "adjacent twins"),
        ZooEntry("twin_vertex", {"base": "chain"}, ["lambda = 0: every vertex Singular"], "false twins"),
        ZooEntry("K", {"n": 3}, ["spectrum {2, -1, -1}"], "complete graph"),
        ZooEntry("petersen", {}, ["3-regular, spectrum {3, 1^5, -2^4}"], "Petersen graph"),
        ZooEntry("delta82", {}, ["x^3-x^2-6x+2 divides the characteristic polynomial"], "block of delta_chain_82"),
        ZooEntry("delta83", {}, ["propagator from u(1) vanishes at u(6) for nonreal lambda"], "block of cubic_83"),
        ZooEntry("delta83_check", {}, ["delta83 with pendant vertices at u(1), u(6)"], "extended block"),
    ]


# ---------------------------------------------------------------- oracles


def chain_green_closed_form(lam: complex, k: int) -> complex:
    """Square-summable chain propagator at distance k: rho^|k| * rho / (rho^2 - 1)."""
    lam = complex(lam)
    disc = cmath.sqrt(lam * lam - 4)
    r1, r2 = (lam - disc) / 2, (lam + disc) / 2
    rho = r1 if abs(r1) <= abs(r2) else r2
    if abs(rho) >= 1 - 1e-14:
        raise ValueError(f"lambda = {lam} lies on [-2, 2]")
    return rho ** abs(k) * rho / (rho * rho - 1)


def sqrt_in_field(field: Field, x):
    """A square root of ``x`` in ``field`` or None.

    Complete for Q, GF(p), quadratic number fields and the complex adapter.
    """
    if isinstance(field, ComplexApprox):
        return cmath.sqrt(x)
    if isinstance(field, Rationals):
        return _rational_sqrt(Fraction(x))
    if isinstance(field, PrimeField):
        for y in range(field.p):
            if y * y % field.p == x:
                return y
        return None
    if isinstance(field, NumberField):
        if field.deg == 1:
            r = _rational_sqrt(x[0])
            return None if r is None else (r,)
        if field.deg != 2:
            return None
        m0, m1 = field.minpoly[0], field.minpoly[1]
        u, v = x
        if v == 0:
            r = _rational_sqrt(u)
            if r is not None:
                return (r, Fraction(0))
        # (s + t a)^2 = u + v a with T = t^2:
        # (m1^2 - 4 m0) T^2 + (2 v m1 - 4 u) T + v^2 = 0
        A, B, C = Fraction(m1 * m1 - 4 * m0), 2 * v * m1 - 4 * u, v * v
        roots = []
        if A == 0:
            if B != 0:
                roots = [-C / B]
        else:
            d = _rational_sqrt(B * B - 4 * A * C)
            if d is not None:
                roots = [(-B + d) / (2 * A), (-B - d) / (2 * A)]
        for T in roots:
            t = _rational_sqrt(T) if T > 0 else None
            if t:
                s = (v + m1 * T) / (2 * t)
                cand = (s, t)
                if field.mul(cand, cand) == tuple(x):
                    return cand
        return None
    return None


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def chain_eigenfunction(field: Field, lam, c1, c2, i: int, root=None):
    """c1 a^i + c2 b^i with a, b the roots of z^2 - lam z + 1 (ab = 1);
    eps^i (c1 + c2 i) when the roots coincide."""
    two = field.from_int(2)
    disc = field.sub(field.mul(lam, lam), field.from_int(4))
    if field.is_zero(disc):
        eps = field.one if field.is_zero(two) else field.div(lam, two)
        return field.mul(field.pow(eps, i), field.add(c1, field.mul(c2, field.from_int(i))))
    if root is None:
        s = sqrt_in_field(field, disc)
        if s is None:
            raise ValueError(f"z^2 - lambda z + 1 does not split over {field.spec()}")
        root = field.div(field.add(lam, s), two)
    a = root
    b = field.inv(a)
    if not field.eq(field.add(a, b), lam):
        raise ValueError("supplied root does not satisfy z^2 - lambda z + 1 = 0")
    return field.add(field.mul(c1, field.pow(a, i)), field.mul(c2, field.pow(b, i)))
