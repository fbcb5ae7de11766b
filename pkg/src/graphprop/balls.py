"""Ball truncation systems, inconsistency radii and exact certificates.

An eigenfunction certificate is a finitely supported f with (A - lam)f = 0;
a propagator certificate is p with (A - lam)p = delta_v, either globally (p
finitely supported) or only on a ball B(v, r).  Both re-verify exactly when
built, so anything handed out by this module has been checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Union

from graphprop.fields import Field, field_make
from graphprop.graph import Graph, ball, bfs_layers, gamma2_components, sort_vertices
from graphprop.linalg import Inconsistent, LinearSystem, VerificationError, solve


class CertificateError(VerificationError):
    """A certificate failed exact re-substitution."""


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class FiniteSupportFunction:
    field: Field
    entries: dict  # sorted label -> nonzero scalar

    @classmethod
    def from_values(cls, F: Field, values: dict) -> "FiniteSupportFunction":
        keep = {k: v for k, v in values.items() if not F.is_zero(v)}
        return cls(F, {k: keep[k] for k in sort_vertices(keep)})

    @property
    def support(self) -> list:
        return list(self.entries)

    def __call__(self, u):
        return self.entries.get(u, self.field.zero)

    def scaled(self, c) -> "FiniteSupportFunction":
        F = self.field
        return FiniteSupportFunction.from_values(F, {k: F.mul(c, v) for k, v in self.entries.items()})

    def restrict(self, X: Iterable) -> "FiniteSupportFunction":
        X = set(X)
        return FiniteSupportFunction.from_values(self.field, {k: v for k, v in self.entries.items() if k in X})


def apply_shifted(graph: Graph, F: Field, lam, f: FiniteSupportFunction, u):
    """((A - lam E) f)(u)."""
    acc = F.neg(F.mul(lam, f(u)))
    for w in graph.neighbors(u):
        val = f.entries.get(w)
        if val is not None:
            acc = F.add(acc, val)
    return acc


def _closure(graph: Graph, X: Iterable) -> list:
    out = set(X)
    for u in list(out):
        out.update(graph.neighbors(u))
    return sort_vertices(out)


def _entries_json(f: FiniteSupportFunction) -> list:
    return [[k, f.field.format(v)] for k, v in f.entries.items()]


def _entries_parse(F: Field, entries) -> FiniteSupportFunction:
    return FiniteSupportFunction.from_values(F, {k: F.parse(s) for k, s in entries})


@dataclass(frozen=True)
class EigenCertificate:
    graph: Graph = field(repr=False)
    lam: Any
    f: FiniteSupportFunction
    anchor: str

    def __post_init__(self):
        self.verify()

    @property
    def field(self) -> Field:
        return self.f.field

    def verify(self):
        F = self.field
        if not self.f.entries:
            raise CertificateError("eigenfunction certificate has empty support")
        if self.anchor not in self.f.entries:
            raise CertificateError(f"anchor {self.anchor} not in the support")
        for u in _closure(self.graph, self.f.support):
            if not F.is_zero(apply_shifted(self.graph, F, self.lam, self.f, u)):
                raise CertificateError(f"eigen-equation fails at {u}")

    def to_json(self) -> dict:
        F = self.field
        return {
            "kind": "eigen",
            "graph": _graph_spec(self.graph),
            "field": F.descriptor(),
            "lambda": F.format(self.lam),
            "anchor": self.anchor,
            "scope": "global",
            "entries": _entries_json(self.f),
        }


@dataclass(frozen=True)
class PropagatorCertificate:
    graph: Graph = field(repr=False)
    lam: Any
    source: str
    p: FiniteSupportFunction
    scope: Union[str, int] = "global"  # "global" or the ball radius

    def __post_init__(self):
        self.verify()

    @property
    def field(self) -> Field:
        return self.p.field

    def checked_vertices(self) -> list:
        if self.scope == "global":
            return _closure(self.graph, set(self.p.support) | {self.source})
        return sort_vertices(bfs_layers(self.graph, self.source, int(self.scope)))

    def verify(self):
        F = self.field
        for u in self.checked_vertices():
            want = F.one if u == self.source else F.zero
            if not F.eq(apply_shifted(self.graph, F, self.lam, self.p, u), want):
                raise CertificateError(f"propagator equation fails at {u}")

    def to_json(self) -> dict:
        F = self.field
        return {
            "kind": "propagator",
            "graph": _graph_spec(self.graph),
            "field": F.descriptor(),
            "lambda": F.format(self.lam),
            "source": self.source,
            "scope": "global" if self.scope == "global" else {"ball": int(self.scope)},
            "entries": _entries_json(self.p),
        }


def _graph_spec(graph: Graph) -> str:
    return graph.params.get("spec", graph.name)


def certificate_from_json(data: dict, graph: Graph):
    """Rebuild (and thereby re-verify) a certificate against ``graph``."""
    F = field_make(data["field"])
    lam = F.parse(data["lambda"])
    f = _entries_parse(F, data["entries"])
    if data["kind"] == "eigen":
        return EigenCertificate(graph, lam, f, data["anchor"])
    if data["kind"] == "propagator":
        scope = data.get("scope", "global")
        if isinstance(scope, dict):
            scope = int(scope["ball"])
        return PropagatorCertificate(graph, lam, data["source"], f, scope)
    raise ValueError(f"unknown certificate kind {data['kind']!r}")


# ---------------------------------------------------------------- systems


def _eq_row(graph: Graph, F: Field, lam, u, columns: Optional[set] = None) -> dict:
    coeffs: dict = {}
    for w in graph.neighbors(u):
        if columns is None or w in columns:
            coeffs[w] = F.add(coeffs.get(w, F.zero), F.one)
    if columns is None or u in columns:
        coeffs[u] = F.sub(coeffs.get(u, F.zero), lam)
    return coeffs


def build_syst(graph: Graph, F: Field, lam, v, r: int) -> LinearSystem:
    """Normalised eigen-system on B(v, r): x_v = 1 plus one equation per u in B(v, r)."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    v = graph.canonical(v)
    b = ball(graph, v, r)
    system = LinearSystem(tuple(sort_vertices(bfs_layers(graph, v, r + 1))))
    system.add_row({v: F.one}, F.one, ("normalize", v), field=F)
    for u in b.interior:
        system.add_row(_eq_row(graph, F, lam, u), F.zero, ("eq", u), field=F)
    return system


def build_prsyst(graph: Graph, F: Field, lam, v, r: int) -> LinearSystem:
    """Propagator system on B(v, r): ((A - lam)x)(u) = delta_v(u) for u in B(v, r)."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    v = graph.canonical(v)
    b = ball(graph, v, r)
    system = LinearSystem(tuple(sort_vertices(bfs_layers(graph, v, r + 1))))
    system.add_row(_eq_row(graph, F, lam, v), F.one, ("source", v), field=F)
    for u in b.interior:
        if u != v:
            system.add_row(_eq_row(graph, F, lam, u), F.zero, ("eq", u), field=F)
    return system


@dataclass(frozen=True)
class Finite:
    radius: int
    witness: dict
    system: LinearSystem = field(repr=False)

    def witness_rows(self) -> list:
        """(row tag, multiplier) pairs of the Toeplitz witness."""
        return [(self.system.rows[i].tag, b) for i, b in self.witness.items()]


@dataclass(frozen=True)
class AtLeast:
    radius: int
    solution: dict = field(repr=False)


def _ball_is_everything(graph: Graph, v, r: int) -> bool:
    """True when B(v, r) already is the whole (finite) component of v."""
    return len(bfs_layers(graph, v, r + 1)) == len(bfs_layers(graph, v, r))


def _radius(builder, graph, F, lam, v, r_max, check_monotone):
    v = graph.canonical(v)
    last = None
    for r in range(r_max + 1):
        system = builder(graph, F, lam, v, r)
        res = solve(system, F, kernel=False)
        if isinstance(res, Inconsistent):
            if check_monotone:
                nxt = solve(builder(graph, F, lam, v, r + 1), F, kernel=False)
                assert isinstance(nxt, Inconsistent), "inconsistency must persist at larger radii"
            return Finite(r, res.witness, system)
        last = res
        if _ball_is_everything(graph, v, r):
            break
    return AtLeast(r_max + 1, last.particular)


def radius_of_inconsistency(graph: Graph, F, lam, v, r_max: int, *, check_monotone: bool = True):
    """Least r with Syst_r unsolvable (Finite, with witness) or AtLeast(r_max + 1)."""
    return _radius(build_syst, graph, field_make(F), lam, v, r_max, check_monotone)


def radius_of_propagator_inconsistency(graph: Graph, F, lam, v, r_max: int, *, check_monotone: bool = True):
    """Same as :func:`radius_of_inconsistency` for the propagator systems."""
    return _radius(build_prsyst, graph, field_make(F), lam, v, r_max, check_monotone)


# ---------------------------------------------------------------- supports


def eigenfunction_with_support_in(graph: Graph, F, lam, X: Iterable, v) -> Optional[EigenCertificate]:
    """An eigenfunction with support inside X and f(v) = 1, or None.

    Columns are X; there is one homogeneous row per vertex of X and of its
    boundary, and an extra row fixes x_v = 1.
    """
    F = field_make(F)
    v = graph.canonical(v)
    cols = sort_vertices(set(X))
    colset = set(cols)
    if v not in colset:
        raise ValueError(f"{v} is not in X")
    system = LinearSystem(tuple(cols))
    system.add_row({v: F.one}, F.one, ("normalize", v), field=F)
    for u in _closure(graph, cols):
        system.add_row(_eq_row(graph, F, lam, u, colset), F.zero, ("eq", u), field=F)
    res = solve(system, F, kernel=False)
    if isinstance(res, Inconsistent):
        return None
    return EigenCertificate(graph, lam, FiniteSupportFunction.from_values(F, res.particular), v)


def propagator_with_support_in(graph: Graph, F, lam, X: Iterable, v) -> Optional[PropagatorCertificate]:
    """A propagator from v supported inside X (certified globally), or None."""
    F = field_make(F)
    v = graph.canonical(v)
    cols = sort_vertices(set(X))
    colset = set(cols)
    if v not in colset:
        raise ValueError(f"{v} is not in X")
    system = LinearSystem(tuple(cols))
    for u in _closure(graph, cols):
        rhs = F.one if u == v else F.zero
        system.add_row(_eq_row(graph, F, lam, u, colset), rhs, ("eq", u), field=F)
    res = solve(system, F, kernel=False)
    if isinstance(res, Inconsistent):
        return None
    return PropagatorCertificate(graph, lam, v, FiniteSupportFunction.from_values(F, res.particular), "global")


def ball_propagator(graph: Graph, F, lam, v, r: int) -> Optional[PropagatorCertificate]:
    """A propagator valid on B(v, r) (from PrSyst_r), or None when that system is unsolvable."""
    F = field_make(F)
    v = graph.canonical(v)
    res = solve(build_prsyst(graph, F, lam, v, r), F, kernel=False)
    if isinstance(res, Inconsistent):
        return None
    return PropagatorCertificate(graph, lam, v, FiniteSupportFunction.from_values(F, res.particular), r)


@dataclass(frozen=True)
class Singular:
    certificate: EigenCertificate
    radius: int
    kind = "Singular"


@dataclass(frozen=True)
class Local:
    certificate: PropagatorCertificate
    radius: int
    kind = "Local"


@dataclass(frozen=True)
class Unknown:
    radius: int
    kind = "Unknown"


def classify_vertex(graph: Graph, F, lam, v, r_max: int):
    """Search B(v, 0), B(v, 1), ... for an eigenfunction or a finite propagator.

    Returns Singular, Local or Unknown(r_max).  When one search succeeds the
    other is run on the same ball and must fail.
    """
    F = field_make(F)
    if not F.exact:
        raise TypeError("classification needs an exact field")
    v = graph.canonical(v)
    for r in range(r_max + 1):
        X = bfs_layers(graph, v, r)
        eig = eigenfunction_with_support_in(graph, F, lam, X, v)
        if eig is not None:
            assert propagator_with_support_in(graph, F, lam, X, v) is None, "both certificates found"
            return Singular(eig, r)
        prop = propagator_with_support_in(graph, F, lam, X, v)
        if prop is not None:
            return Local(prop, r)
        if _ball_is_everything(graph, v, r):
            raise AssertionError(f"finite component of {v} admits neither certificate")
    return Unknown(r_max)


def minimize_support(graph: Graph, F, lam, cert: EigenCertificate) -> EigenCertificate:
    """Restrict to the Gamma^2-component of the support containing the anchor."""
    for block in gamma2_components(graph, cert.f.support):
        if cert.anchor in block:
            if len(block) == len(cert.f.entries):
                return cert
            return EigenCertificate(graph, cert.lam, cert.f.restrict(block), cert.anchor)
    raise AssertionError("anchor lost")  # pragma: no cover


def finite_graph_S_L(graph: Graph, F, lam) -> tuple[list, list]:
    """(S, L) for a finite graph: S is the union of eigenfunction supports."""
    from graphprop.linalg import finite_kernel

    F = field_make(F)
    basis = finite_kernel(graph, F, lam)
    S = set()
    for vec in basis:
        S.update(k for k, val in vec.items() if not F.is_zero(val))
    S_sorted = sort_vertices(S)
    L = [u for u in graph.vertices if u not in S]
    return S_sorted, L


def embed_certificate(cert, target: Field, embed):
    """Map a certificate entrywise through a field embedding ``embed``."""
    def conv(f):
        return FiniteSupportFunction.from_values(target, {k: embed(x) for k, x in f.entries.items()})

    lam = embed(cert.lam)
    if isinstance(cert, EigenCertificate):
        return EigenCertificate(cert.graph, lam, conv(cert.f), cert.anchor)
    return PropagatorCertificate(cert.graph, lam, cert.source, conv(cert.p), cert.scope)


__all__ = [
    "AtLeast", "CertificateError", "EigenCertificate", "Finite", "FiniteSupportFunction", "Local",
    "PropagatorCertificate", "Singular", "Unknown", "apply_shifted", "ball_propagator", "build_prsyst",
    "build_syst", "certificate_from_json", "classify_vertex", "eigenfunction_with_support_in",
    "embed_certificate", "finite_graph_S_L", "minimize_support", "propagator_with_support_in",
    "radius_of_inconsistency", "radius_of_propagator_inconsistency",
]
