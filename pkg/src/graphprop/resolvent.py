"""Dirichlet ball truncation of the resolvent for lambda off [-d, d].

The finite system (A_X - lam) p = delta_v on X = B(v, r), with p = 0 outside
X, is always solvable for such lambda because A_X is symmetric with spectrum
inside [-d, d].  ``cauchy_delta`` compares the solution with the one on a
smaller ball; it is a convergence indicator, not a proven error bound.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse import csc_matrix, identity
from scipy.sparse.linalg import splu

from graphprop.graph import Graph, bfs_layers, sort_vertices
from graphprop.series import DomainError, UnsupportedError


class TruncationError(RuntimeError):
    """The truncated system misbehaved (should not happen off [-d, d])."""


def distance_to_segment(lam: complex, d: float) -> float:
    lam = complex(lam)
    if abs(lam.real) <= d:
        return abs(lam.imag)
    edge = d if lam.real > 0 else -d
    return abs(lam - edge)


@dataclass
class ResolventApprox:
    lam: complex
    source: str
    radius: int
    values: Optional[dict] = field(default=None, repr=False)  # explicit solves
    layer_values: Optional[list] = field(default=None, repr=False)  # radial solves
    cauchy_delta: float = float("inf")
    residual: float = 0.0
    graph: Optional[Graph] = field(default=None, repr=False)

    def value(self, w) -> complex:
        """Approximate propagator at w (0 outside the ball)."""
        if self.values is not None:
            return self.values.get(w, 0j)
        k = self.graph.radial.distance(self.source, w)
        return self.layer_values[k] if k <= self.radius else 0j


def _check(graph: Graph, lam: complex, margin: float) -> int:
    d = graph.degree_bound
    if d is None:
        raise UnsupportedError(f"{graph.name} declares no degree bound")
    if distance_to_segment(lam, d) < margin:
        raise DomainError(f"lambda = {lam} is within {margin:g} of [-{d}, {d}]")
    return d


def _solve_explicit(graph: Graph, lam: complex, v, r: int):
    dist = bfs_layers(graph, v, r)
    verts = sort_vertices(dist)
    index = {u: i for i, u in enumerate(verts)}
    rows, cols = [], []
    for u in verts:
        for w in graph.neighbors(u):
            j = index.get(w)
            if j is not None:
                rows.append(index[u])
                cols.append(j)
    n = len(verts)
    A = csc_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n), dtype=complex)
    M = (A - lam * identity(n, dtype=complex, format="csc")).tocsc()
    b = np.zeros(n, dtype=complex)
    b[index[v]] = 1.0
    lu = splu(M)
    p = lu.solve(b)
    p = p + lu.solve(b - M @ p)  # one step of iterative refinement
    values = {u: complex(p[index[u]]) for u in verts}
    # eigen-identity residual at vertices whose neighbours all lie in the ball
    res = M @ p - b
    inner = [index[u] for u in verts if dist[u] <= r - 1]
    residual = float(np.max(np.abs(res[inner]))) if inner else 0.0
    return values, dist, residual


def _solve_radial(graph: Graph, lam: complex, r: int):
    prof = graph.radial
    n = r + 1
    coef = [prof.intersection(k) for k in range(n)]
    # row k: c_k g(k-1) + (a_k - lam) g(k) + b_k g(k+1) = delta_{k0}
    ab = np.zeros((3, n), dtype=complex)
    for k, (c, a, b) in enumerate(coef):
        ab[1, k] = a - lam
        if k + 1 < n:
            ab[0, k + 1] = b
        if k > 0:
            ab[2, k - 1] = c
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0

    def apply(g):
        out = (np.array([a for _, a, _ in coef]) - lam) * g
        out[:-1] += np.array([b for _, _, b in coef[:-1]]) * g[1:]
        out[1:] += np.array([c for c, _, _ in coef[1:]]) * g[:-1]
        return out

    g = solve_banded((1, 1), ab, rhs)
    g = g + solve_banded((1, 1), ab, rhs - apply(g))
    res = apply(g) - rhs
    residual = float(np.max(np.abs(res[:r]))) if r > 0 else 0.0
    return [complex(x) for x in g], residual


def truncated_resolvent(graph: Graph, lam, v, r: int, *, margin: float = 1e-3, step: int = 2,
                        radial: Optional[bool] = None, check: bool = True) -> ResolventApprox:
    """Solve the Dirichlet-truncated propagator system on B(v, r).

    Radial families are solved on the distance-layer quotient (a tridiagonal
    system); pass ``radial=False`` to force the explicit sparse solve.
    """
    lam = complex(lam)
    _check(graph, lam, margin)
    if r < 0:
        raise ValueError("radius must be >= 0")
    v = graph.canonical(v)
    use_radial = graph.radial is not None if radial is None else radial
    if use_radial and graph.radial is None:
        raise UnsupportedError(f"{graph.name} has no radial profile")
    r_small = max(r - step, 0)
    if use_radial:
        layers, residual = _solve_radial(graph, lam, r)
        small, _ = _solve_radial(graph, lam, r_small)
        delta = max(abs(layers[k] - small[k]) for k in range(min(r // 2, r_small) + 1))
        out = ResolventApprox(lam, v, r, layer_values=layers, cauchy_delta=delta, residual=residual, graph=graph)
        norm = float(np.sqrt(sum(abs(x) ** 2 * graph.radial.layer_size(k) for k, x in enumerate(layers))))
    else:
        values, dist, residual = _solve_explicit(graph, lam, v, r)
        small, _, _ = _solve_explicit(graph, lam, v, r_small)
        delta = max(abs(values[u] - small.get(u, 0j)) for u, k in dist.items() if k <= r / 2)
        out = ResolventApprox(lam, v, r, values=values, cauchy_delta=delta, residual=residual, graph=graph)
        norm = float(np.sqrt(sum(abs(x) ** 2 for x in values.values())))
    if check and residual > 1e-10 * max(norm, 1.0):
        raise TruncationError(f"residual {residual:g} too large at lambda = {lam}")
    return out


@dataclass
class ScanRow:
    lam: complex
    value: Optional[complex]
    cauchy_delta: Optional[float]
    skipped: bool = False


def resolvent_scan(graph: Graph, v, w, grid: Iterable, r: int, *, margin: float = 1e-3,
                   jobs: int = 1) -> list[ScanRow]:
    """Truncated resolvent at w for each lambda on the grid; points in the band are skipped."""
    grid = [complex(z) for z in grid]
    v, w = graph.canonical(v), graph.canonical(w)

    def one(lam):
        try:
            approx = truncated_resolvent(graph, lam, v, r, margin=margin)
        except DomainError:
            return ScanRow(lam, None, None, True)
        return ScanRow(lam, approx.value(w), approx.cauchy_delta)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, grid))
    return [one(lam) for lam in grid]


def scan_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["re_lambda", "im_lambda", "re_value", "im_value", "cauchy_delta"])
    for row in rows:
        if row.skipped:
            out.writerow([repr(row.lam.real), repr(row.lam.imag), "skipped", "skipped", "skipped"])
        else:
            out.writerow([repr(row.lam.real), repr(row.lam.imag), repr(row.value.real), repr(row.value.imag),
                          repr(row.cauchy_delta)])
    return buf.getvalue()
