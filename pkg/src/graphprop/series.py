"""Walk-count tables and the generating-series propagator.

N(v, w, n) counts walks of length n from v to w.  The series
p(w) = -x * sum_n N(v, w, n) x^n solves (A - 1/x) p = delta_v over Q((x)),
and for complex lam with |lam| > d substituting x = 1/lam gives a convergent
Green's function value.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from graphprop.fields import RationalFunctions
from graphprop.graph import Graph, bfs_layers, sort_vertices
from graphprop.linalg import Inconsistent, LinearSystem, solve


class DomainError(ValueError):
    """Spectral parameter outside the region where the routine is valid."""


class UnsupportedError(ValueError):
    """The graph family lacks a hook the routine needs."""


# ---------------------------------------------------------------- tables


@dataclass
class SeriesTable:
    source: str
    n_max: int
    counts: dict  # w -> [N(v,w,0), ..., N(v,w,n_max)]

    def get(self, w, n: int) -> int:
        row = self.counts.get(w)
        return 0 if row is None else row[n]

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["w", "n", "count"])
        for w, row in self.counts.items():
            for n, c in enumerate(row):
                if c:
                    out.writerow([w, n, c])
        return buf.getvalue()


def _walk_vectors(graph: Graph, v, n_max: int):
    """Yield the dicts N(v, ., n) for n = 0..n_max."""
    cur = {v: 1}
    yield cur
    for _ in range(n_max):
        nxt: dict = {}
        for u, c in cur.items():
            for w in graph.neighbors(u):
                nxt[w] = nxt.get(w, 0) + c
        cur = nxt
        yield cur


def path_counts(graph: Graph, v, n_max: int) -> SeriesTable:
    """Exact walk counts N(v, w, n) for n <= n_max by iterating A on delta_v."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    v = graph.canonical(v)
    rows: dict = {}
    for n, vec in enumerate(_walk_vectors(graph, v, n_max)):
        for w, c in vec.items():
            rows.setdefault(w, [0] * (n_max + 1))[n] = c
    counts = {w: rows[w] for w in sort_vertices(rows)}
    return SeriesTable(v, n_max, counts)


def radial_counts(graph: Graph, n_max: int, k_max: Optional[int] = None) -> list[list[int]]:
    """Per-vertex walk counts by distance layer: out[n][k] = N(v, w, n) for d(v, w) = k.

    Needs a graph whose distance partition around every vertex is equitable.
    """
    prof = graph.radial
    if prof is None:
        raise UnsupportedError(f"{graph.name} has no radial profile")
    # walks may leave layer k_max and come back, so every layer is tracked
    K = n_max
    keep = K if k_max is None else min(k_max, n_max)
    coef = [prof.intersection(k) for k in range(K + 2)]
    cur = [0] * (K + 2)
    cur[0] = 1
    out = [cur[: keep + 1]]
    for _ in range(n_max):
        nxt = [0] * (K + 2)
        for k in range(K + 1):
            c, a, b = coef[k]
            s = a * cur[k] + b * cur[k + 1]
            if k:
                s += c * cur[k - 1]
            nxt[k] = s
        cur = nxt
        out.append(cur[: keep + 1])
    return out


def series_propagator_check(graph: Graph, v, n_max: int, table: Optional[SeriesTable] = None) -> list[tuple[int, bool]]:
    """Check (A - 1/x)(-x W) = delta_v order by order.

    Order 0 is N(v, ., 0) = delta_v; order n >= 1 is the walk recurrence
    N(v, w, n) = sum over neighbours w' of N(v, w', n - 1).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    v = graph.canonical(v)
    table = table or path_counts(graph, v, n_max)
    report = []
    zero_ok = all(table.get(w, 0) == (1 if w == v else 0) for w in table.counts) and table.get(v, 0) == 1
    report.append((0, zero_ok))
    dist = bfs_layers(graph, v, n_max)
    for n in range(1, n_max + 1):
        ok = True
        for w, d in dist.items():
            if d > n:
                continue
            if table.get(w, n) != sum(table.get(u, n - 1) for u in graph.neighbors(w)):
                ok = False
                break
        if ok:
            ok = all(table.get(w, n) == 0 for w in table.counts if w not in dist or dist[w] > n)
        report.append((n, ok))
    return report


# ---------------------------------------------------------------- non-backtracking


@dataclass
class NonBacktrackingReport:
    counts: SeriesTable
    degree: int
    identity: dict  # w -> bool
    ok: bool


def _nb_table(graph: Graph, v, n_max: int, d: int) -> dict:
    dist = bfs_layers(graph, v, n_max)
    verts = sort_vertices(dist)
    rows = {w: [0] * (n_max + 1) for w in verts}
    rows[v][0] = 1
    for n in range(1, n_max + 1):
        for w in verts:
            if dist[w] > n:
                continue
            s = sum(rows[u][n - 1] for u in graph.neighbors(w) if u in rows)
            if n >= 2:
                s -= (d - 1) * rows[w][n - 2]
            rows[w][n] = s
        if n == 2:
            rows[v][2] = 0  # the recurrence does not hold for closed walks of length 2
    return rows


def _series_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def _compose(coeffs, g, n):
    """sum_k coeffs[k] g^k truncated at x^n, with g(0) = 0."""
    out = [0] * (n + 1)
    power = [1] + [0] * n
    for c in coeffs[: n + 1]:
        if c:
            for i in range(n + 1):
                out[i] += c * power[i]
        power = _series_mul(power, g, n)
    return out


def nonbacktracking_counts(graph: Graph, v, n_max: int) -> NonBacktrackingReport:
    """Non-backtracking walk counts and the substitution identity against W."""
    if not graph.regular or graph.degree_bound is None:
        raise UnsupportedError(f"{graph.name} is not declared regular")
    v = graph.canonical(v)
    d = graph.degree(v)
    rows = _nb_table(graph, v, n_max, d)
    table = SeriesTable(v, n_max, {w: r for w, r in rows.items() if any(r)})
    plain = path_counts(graph, v, n_max)
    # 1 / (1 + (d-1) x^2) as an integer power series
    inv = [0] * (n_max + 1)
    for m in range(0, n_max + 1, 2):
        inv[m] = (-(d - 1)) ** (m // 2)
    g = _series_mul([0, 1], inv, n_max)
    factor = _series_mul([1, 0, -1], inv, n_max)
    identity = {}
    for w in sort_vertices(set(rows) | set(plain.counts)):
        W = plain.counts.get(w, [0] * (n_max + 1))
        rhs = _series_mul(factor, _compose(W, g, n_max), n_max)
        lhs = rows.get(w, [0] * (n_max + 1))
        identity[w] = lhs == rhs
    return NonBacktrackingReport(table, d, identity, all(identity.values()))


def brute_force_nonbacktracking(graph: Graph, v, w, n: int) -> int:
    """Count non-backtracking walks v -> w of length n by depth-first enumeration."""
    count = 0

    def walk(prev, cur, left):
        nonlocal count
        if left == 0:
            count += cur == w
            return
        for u in graph.neighbors(cur):
            if u != prev:
                walk(cur, u, left - 1)

    walk(None, v, n)
    return count


# ---------------------------------------------------------------- Green's function


@dataclass
class GreenValue:
    lam: complex
    value: complex
    tail_bound: float
    terms: int = 0
    source: str = ""
    target: str = ""

    def to_json(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "value": [self.value.real, self.value.imag],
            "tail_bound": self.tail_bound,
        }


def tail_bound(d: int, lam_abs: float, N: int) -> float:
    """Bound on |sum_{n > N} N(v,w,n) lam^(-n-1)| using N(v,w,n) <= d^n."""
    return (d / lam_abs) ** (N + 1) / (lam_abs - d)


def terms_needed(d: int, lam_abs: float, eps: float) -> int:
    """Least N with tail_bound(d, |lam|, N) <= eps."""
    q = d / lam_abs
    if q == 0:
        return 0
    N = max(0, math.ceil(math.log(eps * (lam_abs - d)) / math.log(q)) - 1)
    while tail_bound(d, lam_abs, N) > eps:
        N += 1
    while N > 0 and tail_bound(d, lam_abs, N - 1) <= eps:
        N -= 1
    return N


def _scaled_term(count: int, n: int, log_lam: complex) -> complex:
    """count * lam^(-n-1) without overflowing floats on huge counts."""
    if count == 0:
        return 0j
    shift = max(0, count.bit_length() - 60)
    return float(count >> shift) * cmath.exp(shift * math.log(2) - (n + 1) * log_lam)


def _check_domain(graph: Graph, lam: complex, margin: float) -> int:
    d = graph.degree_bound
    if d is None:
        raise UnsupportedError(f"{graph.name} declares no degree bound")
    if abs(lam) <= d + margin:
        raise DomainError(f"|lambda| = {abs(lam):g} must exceed d + margin = {d + margin:g}")
    return d


def _green_from_counts(counts, lam: complex, d: int, eps: float, N: int) -> tuple[complex, float]:
    log_lam = cmath.log(lam)
    total = 0j
    for n, c in enumerate(counts):
        total += _scaled_term(c, n, log_lam)
    return -total, tail_bound(d, abs(lam), N)


def eval_green(graph: Graph, lam, v, w, eps: float = 1e-10, margin: float = 1e-6) -> GreenValue:
    """s(w) = -sum_n N(v, w, n) lam^(-n-1), truncated so the tail is at most eps."""
    lam = complex(lam)
    d = _check_domain(graph, lam, margin)
    v, w = graph.canonical(v), graph.canonical(w)
    N = terms_needed(d, abs(lam), eps)
    if graph.radial is not None:
        k = graph.radial.distance(v, w)
        if k > N:
            counts = [0] * (N + 1)
        else:
            layers = radial_counts(graph, N, k)
            counts = [row[k] for row in layers]
    else:
        counts = [vec.get(w, 0) for vec in _walk_vectors(graph, v, N)]
    value, bound = _green_from_counts(counts, lam, d, eps, N)
    return GreenValue(lam, value, bound, N + 1, v, w)


def green_profile(graph: Graph, lam, k_max: int, eps: float = 1e-10, margin: float = 1e-6) -> list[GreenValue]:
    """Green's function at every distance 0..k_max (radial families only)."""
    lam = complex(lam)
    d = _check_domain(graph, lam, margin)
    N = terms_needed(d, abs(lam), eps)
    layers = radial_counts(graph, max(N, k_max), k_max)
    out = []
    for k in range(k_max + 1):
        counts = [row[k] if k < len(row) else 0 for row in layers[: N + 1]]
        value, bound = _green_from_counts(counts, lam, d, eps, N)
        out.append(GreenValue(lam, value, bound, N + 1))
    return out


# ---------------------------------------------------------------- positive eigenfunctions


@dataclass
class PositiveEigenApprox:
    lam: float
    center: str
    far_vertex: str
    values: dict = field(repr=False)
    residual: float = 0.0
    max_edge_ratio: float = 0.0


def positive_eigenfunction_approx(graph: Graph, lam: float, v, r: int, *, far: Optional[int] = None,
                                  rel_eps: float = 1e-13, ratio_tol: float = 1e-9) -> PositiveEigenApprox:
    """f(w) = s_u(w) / s_u(v) on B(v, r) for a vertex u far out along the family ray.

    Each Green value is summed until its tail is below ``rel_eps`` times its
    leading term, so small values far from u keep their relative accuracy.
    """
    if graph.ray is None:
        raise UnsupportedError(f"{graph.name} has no ray provider")
    lam = float(lam)
    d = graph.degree_bound
    if d is None or lam <= d:
        raise DomainError(f"lambda = {lam} must exceed the degree bound {d}")
    v = graph.canonical(v)
    far = r + 2 if far is None else far
    if far < r + 2:
        raise ValueError("far vertex must be at distance >= r + 2")
    u = graph.ray(v, far)
    ball = bfs_layers(graph, v, r)

    def s(w):
        if graph.radial is not None:
            k = graph.radial.distance(u, w)
        else:
            k = bfs_layers(graph, u, far + r + 1).get(w)
        # the leading term N(u,w,k) / lam^(k+1) >= lam^(-k-1) bounds |s| from below
        eps = rel_eps * lam ** (-k - 1)
        return eval_green(graph, lam, u, w, eps=eps).value.real

    raw = {w: s(w) for w in sort_vertices(ball)}
    base = raw[v]
    values = {w: x / base for w, x in raw.items()}
    values[v] = 1.0
    residual = 0.0
    for w, dw in ball.items():
        if dw <= r - 1:
            acc = sum(values[x] for x in graph.neighbors(w)) - lam * values[w]
            residual = max(residual, abs(acc))
    ratio = 0.0
    for w in values:
        for x in graph.neighbors(w):
            if x in values:
                ratio = max(ratio, values[w] / values[x])
    if ratio > lam + ratio_tol:
        raise AssertionError(f"edge ratio {ratio} exceeds lambda = {lam}")
    if any(val <= 0 for val in values.values()):
        raise AssertionError("approximation is not positive")
    return PositiveEigenApprox(lam, v, u, values, residual, ratio)


# ---------------------------------------------------------------- rational propagators


class ReconstructionError(RuntimeError):
    """Pade reconstruction disagreed with the exact solve (a bug trap)."""


def exact_qx_propagator(graph: Graph, v, var: str = "x") -> dict:
    """Solve (A - (1/x) E) p = delta_v over Q(x) for a finite graph."""
    F = RationalFunctions(var)
    x = F.generator(var)
    lam = F.inv(x)
    v = graph.canonical(v)
    system = LinearSystem(tuple(graph.vertices))
    for u in graph.vertices:
        coeffs = {w: F.one for w in graph.neighbors(u)}
        coeffs[u] = F.neg(lam)
        system.add_row(coeffs, F.one if u == v else F.zero, ("vertex", u), field=F)
    res = solve(system, F, kernel=False)
    if isinstance(res, Inconsistent):  # pragma: no cover - A - 1/x is invertible over Q(x)
        raise ReconstructionError("A - (1/x)E singular over Q(x)")
    return {u: res.particular.get(u, F.zero) for u in graph.vertices}


def pade_reconstruct(graph: Graph, v, w, var: str = "x"):
    """Recover p_v(w) in Q(x) from 2n+2 walk counts (n = |V|) via an exact Pade solve."""
    if not graph.is_finite:
        raise UnsupportedError("Pade reconstruction needs a finite graph")
    from graphprop.fields import Rationals

    Q = Rationals()
    F = RationalFunctions(var)
    v, w = graph.canonical(v), graph.canonical(w)
    n = len(graph.vertices)
    m = 2 * n + 2
    c = [vec.get(w, 0) for vec in _walk_vectors(graph, v, m - 1)]
    # W * Q - P = O(x^m) with deg P, deg Q <= n and Q(0) = 1
    unknowns = tuple(f"q{j}" for j in range(1, n + 1))
    system = LinearSystem(unknowns)
    for k in range(n + 1, m):
        coeffs = {f"q{j}": Fraction(c[k - j]) for j in range(1, n + 1) if k - j >= 0}
        system.add_row(coeffs, Fraction(-c[k]), ("order", k), field=Q)
    res = solve(system, Q, kernel=False)
    if isinstance(res, Inconsistent):
        raise ReconstructionError("Pade system inconsistent")
    qpoly = [Fraction(1)] + [res.particular.get(f"q{j}", Fraction(0)) for j in range(1, n + 1)]
    ppoly = [sum((qpoly[j] * c[k - j] for j in range(0, k + 1) if j <= n), Fraction(0)) for k in range(n + 1)]
    # p = -x * P / Q
    num = tuple([Fraction(0)] + [-a for a in ppoly])
    value = F.make(num, tuple(qpoly))
    exact = exact_qx_propagator(graph, v, var)[w]
    if not F.eq(value, exact):
        raise ReconstructionError(f"Pade gives {F.format(value)}, exact solve gives {F.format(exact)}")
    return value


@dataclass
class QxReport:
    radii: list  # (r, consistent, unknowns)
    ok: bool
    solution: dict = field(repr=False)


def qx_consistency_check(graph: Graph, v, r_max: int, var: str = "x") -> QxReport:
    """Syst_r over Q(x) with lam = x must be solvable for every r <= r_max."""
    from graphprop.balls import build_syst

    F = RationalFunctions(var)
    lam = F.generator(var)
    v = graph.canonical(v)
    radii = []
    sol: dict = {}
    ok = True
    for r in range(r_max + 1):
        system = build_syst(graph, F, lam, v, r)
        res = solve(system, F, kernel=False)
        good = not isinstance(res, Inconsistent)
        radii.append((r, good, len(system.unknowns)))
        if good:
            sol = res.particular
        ok = ok and good
    return QxReport(radii, ok, sol)
