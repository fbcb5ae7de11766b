"""Exact linear systems over any exact field.

Elimination is deterministic: columns are visited in the given unknown order
and the pivot for a column is the earliest remaining row.  Results verify
themselves against the original rows when constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Optional, Sequence

import numpy as np

from graphprop import kernels, poly
from graphprop.fields import Field, PrimeField, field_make


class NotExactError(TypeError):
    """Exact routines refuse approximate fields."""


@dataclass
class Row:
    coeffs: dict
    rhs: Any
    tag: Any = None


@dataclass
class LinearSystem:
    unknowns: tuple
    rows: list = field(default_factory=list)

    def add_row(self, coeffs: dict, rhs, tag=None, *, field: Field):
        clean = {k: v for k, v in coeffs.items() if not field.is_zero(v)}
        self.rows.append(Row(clean, rhs, tag))

    def to_json(self, field: Field) -> dict:
        return {
            "field": field.descriptor(),
            "unknowns": list(self.unknowns),
            "rows": [
                {
                    "tag": _jsonable(r.tag),
                    "coeffs": [[k, field.format(v)] for k, v in r.coeffs.items()],
                    "rhs": field.format(r.rhs),
                }
                for r in self.rows
            ],
        }


def _jsonable(tag):
    if isinstance(tag, tuple):
        return [_jsonable(t) for t in tag]
    return tag


class VerificationError(AssertionError):
    """A claimed solution or witness failed exact re-substitution."""


def _row_value(F: Field, coeffs: dict, x: dict):
    acc = F.zero
    for k, c in coeffs.items():
        v = x.get(k)
        if v is not None:
            acc = F.add(acc, F.mul(c, v))
    return acc


@dataclass
class Consistent:
    particular: dict
    kernel_basis: Optional[list]
    rank: int

    consistent = True

    def check(self, system: LinearSystem, F: Field):
        for i, row in enumerate(system.rows):
            if not F.eq(_row_value(F, row.coeffs, self.particular), row.rhs):
                raise VerificationError(f"row {i} ({row.tag}) not satisfied")
        for vec in self.kernel_basis or ():
            for i, row in enumerate(system.rows):
                if not F.is_zero(_row_value(F, row.coeffs, vec)):
                    raise VerificationError(f"kernel vector violates row {i}")


@dataclass
class Inconsistent:
    witness: dict  # row index -> multiplier
    rank: int

    consistent = False

    def check(self, system: LinearSystem, F: Field):
        combo: dict = {}
        total = F.zero
        for i, b in self.witness.items():
            row = system.rows[i]
            for k, c in row.coeffs.items():
                combo[k] = F.add(combo.get(k, F.zero), F.mul(b, c))
            total = F.add(total, F.mul(b, row.rhs))
        if any(not F.is_zero(v) for v in combo.values()):
            raise VerificationError("witness does not annihilate the coefficient columns")
        if F.is_zero(total):
            raise VerificationError("witness combination of right-hand sides vanishes")


SolveResult = Any  # Consistent | Inconsistent

DENSE_GFP_LIMIT = 400_000


def solve(system: LinearSystem, F: Field, *, kernel: bool = True, verify: bool = True) -> SolveResult:
    """Solve exactly; Consistent(particular with free unknowns 0, kernel basis)
    or Inconsistent(witness).  ``kernel=False`` skips the kernel basis."""
    if not F.exact:
        raise NotExactError(f"solve needs an exact field, got {F.spec()}")
    n = len(system.unknowns)
    m = len(system.rows)
    if isinstance(F, PrimeField) and F.p < 2**31 and m * (n + 1) <= DENSE_GFP_LIMIT:
        result = _solve_dense_gfp(system, F, kernel)
    else:
        result = _solve_sparse(system, F, kernel)
    if verify:
        result.check(system, F)
    return result


def _normalize_witness(F: Field, combo: dict) -> dict:
    """Scale so the lowest-index multiplier is 1."""
    items = sorted(combo.items())
    inv = F.inv(items[0][1])
    return {i: F.mul(b, inv) for i, b in items}


# ---------------------------------------------------------------- sparse


def _eliminate(n, rows, rhs, F, combos=None):
    """Forward elimination in place.  Returns {col: pivot row}."""
    zero, sub, mul, is_zero = F.zero, F.sub, F.mul, F.is_zero
    col_rows: dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    pivots = {}
    for c in range(n):
        cand = col_rows.get(c)
        if not cand:
            continue
        piv = min(cand)
        prow = rows[piv]
        for cc in prow:
            col_rows[cc].discard(piv)
        inv = F.inv(prow[c])
        if inv != F.one:
            for cc in prow:
                prow[cc] = mul(prow[cc], inv)
            rhs[piv] = mul(rhs[piv], inv)
            if combos is not None:
                combos[piv] = {k: mul(v, inv) for k, v in combos[piv].items()}
        prhs = rhs[piv]
        items = list(prow.items())
        for i in list(cand):
            row = rows[i]
            f = row[c]
            for cc, val in items:
                new = sub(row.get(cc, zero), mul(f, val))
                if is_zero(new):
                    if cc in row:
                        del row[cc]
                        col_rows[cc].discard(i)
                else:
                    if cc not in row:
                        col_rows[cc].add(i)
                    row[cc] = new
            rhs[i] = sub(rhs[i], mul(f, prhs))
            if combos is not None:
                ci = combos[i]
                for k, v in combos[piv].items():
                    nv = sub(ci.get(k, zero), mul(f, v))
                    if is_zero(nv):
                        ci.pop(k, None)
                    else:
                        ci[k] = nv
        pivots[c] = piv
    return pivots


def _back_substitute(pivots, rows, rhs, F, seed: dict, homogeneous: bool):
    x = dict(seed)
    for c in sorted(pivots, reverse=True):
        row = rows[pivots[c]]
        acc = F.zero if homogeneous else rhs[pivots[c]]
        for cc, val in row.items():
            if cc != c:
                xv = x.get(cc)
                if xv is not None:
                    acc = F.sub(acc, F.mul(val, xv))
        if not F.is_zero(acc):
            x[c] = acc
    return x


def _solve_sparse(system: LinearSystem, F: Field, want_kernel: bool):
    index = {u: j for j, u in enumerate(system.unknowns)}
    n = len(index)

    def fresh():
        rows = [{index[k]: v for k, v in r.coeffs.items()} for r in system.rows]
        rhs = [r.rhs for r in system.rows]
        return rows, rhs

    rows, rhs = fresh()
    pivots = _eliminate(n, rows, rhs, F)
    used = set(pivots.values())
    bad = [i for i in range(len(rows)) if i not in used and not rows[i] and not F.is_zero(rhs[i])]
    if bad:
        rows, rhs = fresh()
        combos = [{i: F.one} for i in range(len(rows))]
        pivots = _eliminate(n, rows, rhs, F, combos)
        used = set(pivots.values())
        bad = [i for i in range(len(rows)) if i not in used and not rows[i] and not F.is_zero(rhs[i])]
        return Inconsistent(witness=_normalize_witness(F, combos[bad[0]]), rank=len(pivots))
    names = system.unknowns
    part = _back_substitute(pivots, rows, rhs, F, {}, homogeneous=False)
    basis = None
    if want_kernel:
        basis = []
        for f in range(n):
            if f in pivots:
                continue
            vec = _back_substitute(pivots, rows, rhs, F, {f: F.one}, homogeneous=True)
            basis.append({names[j]: v for j, v in sorted(vec.items())})
    return Consistent(
        particular={names[j]: v for j, v in sorted(part.items())},
        kernel_basis=basis,
        rank=len(pivots),
    )


# ---------------------------------------------------------------- dense GF(p)


def _solve_dense_gfp(system: LinearSystem, F: PrimeField, want_kernel: bool, track: bool = False):
    p = F.p
    index = {u: j for j, u in enumerate(system.unknowns)}
    n, m = len(index), len(system.rows)
    width = n + 1 + (m if track else 0)
    M = np.zeros((m, width), dtype=np.int64)
    for i, r in enumerate(system.rows):
        for k, v in r.coeffs.items():
            M[i, index[k]] = v
        M[i, n] = r.rhs
        if track:
            M[i, n + 1 + i] = 1
    pivots = kernels.rref_mod_p(M, p, n)
    used = {r for _, r in pivots}
    bad = [i for i in range(m) if i not in used and M[i, n] != 0]
    if bad:
        if not track:
            return _solve_dense_gfp(system, F, want_kernel, track=True)
        w = M[bad[0], n + 1:]
        return Inconsistent(witness=_normalize_witness(F, {int(j): int(w[j]) for j in np.nonzero(w)[0]}),
                            rank=len(pivots))
    names = system.unknowns
    part = {names[c]: int(M[r, n]) for c, r in pivots if M[r, n]}
    basis = None
    if want_kernel:
        pivot_cols = {c for c, _ in pivots}
        basis = []
        for f in range(n):
            if f in pivot_cols:
                continue
            vec = {f: 1}
            for c, r in pivots:
                if M[r, f]:
                    vec[c] = int(-M[r, f] % p)
            basis.append({names[j]: v for j, v in sorted(vec.items())})
    return Consistent(particular=dict(sorted(part.items(), key=lambda kv: index[kv[0]])), kernel_basis=basis,
                      rank=len(pivots))


# ---------------------------------------------------------------- graphs


def adjacency_system(graph, F: Field, lam, rhs: Optional[dict] = None) -> LinearSystem:
    """(A - lam E) x = rhs for a finite graph, one row per vertex."""
    verts = graph.vertices
    system = LinearSystem(tuple(verts))
    rhs = rhs or {}
    for u in verts:
        coeffs = {w: F.one for w in graph.neighbors(u)}
        coeffs[u] = F.neg(lam)
        system.add_row(coeffs, rhs.get(u, F.zero), ("vertex", u), field=F)
    return system


def finite_kernel(graph, F, lam) -> list[dict]:
    """Exact basis of ker(A - lam E) for a finite graph."""
    F = field_make(F)
    return solve(adjacency_system(graph, F, lam), F).kernel_basis


def det_poly(matrix: Sequence[Sequence[tuple]]) -> tuple:
    """Determinant of a square matrix over Z[x] by fraction-free Bareiss."""
    M = [list(r) for r in matrix]
    n = len(M)
    if n == 0:
        return (1,)
    sign = 1
    prev = (1,)
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ()
        akk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            for j in range(k + 1, n):
                num = poly.sub(poly.mul(akk, M[i][j]), poly.mul(aik, M[k][j]))
                M[i][j] = poly.exact_div(num, prev) if num else ()
            M[i][k] = ()
        prev = akk
    det = M[n - 1][n - 1]
    return det if sign == 1 else poly.neg(det)


def char_matrix(edges, n: int, vertices=None) -> tuple[list, list]:
    """A - xE over Z[x] with vertices in sorted order."""
    verts = list(vertices) if vertices is not None else sorted({v for e in edges for v in e})
    if len(verts) != n:
        raise ValueError(f"expected {n} vertices, found {len(verts)}")
    idx = {v: i for i, v in enumerate(verts)}
    M = [[() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        M[i][i] = (0, -1)
    for a, b in edges:
        M[idx[a]][idx[b]] = (1,)
        M[idx[b]][idx[a]] = (1,)
    return M, verts


def char_matrix_minors(edges, n: int, vertices=None) -> dict[tuple[Hashable, Hashable], tuple]:
    """All order-(n-1) minors of A - xE: (u, u') -> det with row u, column u' deleted."""
    if n < 2:
        raise ValueError("minors need n >= 2")
    M, verts = char_matrix(edges, n, vertices)
    out = {}
    for a in range(n):
        rows = [M[i] for i in range(n) if i != a]
        for b in range(n):
            if (verts[b], verts[a]) in out:
                # A - xE is symmetric
                out[verts[a], verts[b]] = out[verts[b], verts[a]]
                continue
            sub = [[r[j] for j in range(n) if j != b] for r in rows]
            out[verts[a], verts[b]] = det_poly(sub)
    return out
