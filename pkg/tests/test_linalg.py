from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from graphprop import _gfp_py, kernels
from graphprop.fields import field_make
from graphprop.graph import finite_graph
from graphprop.linalg import (
    Consistent, Inconsistent, LinearSystem, NotExactError, VerificationError, adjacency_system,
    char_matrix_minors, det_poly, finite_kernel, solve,
)
from graphprop.zoo import make_graph

from conftest import connected_atlas

Q = field_make("Q")


def system_from(F, unknowns, rows):
    s = LinearSystem(tuple(unknowns))
    for coeffs, rhs in rows:
        s.add_row({k: F.from_int(v) if isinstance(v, int) else v for k, v in coeffs.items()},
                  F.from_int(rhs) if isinstance(rhs, int) else rhs, field=F)
    return s


def test_contradiction_witness():
    res = solve(system_from(Q, ["x"], [({"x": 1}, 1), ({"x": 1}, 0)]), Q)
    assert isinstance(res, Inconsistent)
    assert res.witness == {0: 1, 1: -1}


def test_empty_system_has_full_kernel():
    res = solve(LinearSystem(("a", "b")), Q)
    assert isinstance(res, Consistent) and len(res.kernel_basis) == 2 and res.rank == 0


def test_k3_minus_one_kernel():
    g = make_graph("K3")
    assert len(finite_kernel(g, "Q", Fraction(-1))) == 2
    assert len(finite_kernel(g, "Q", Fraction(2))) == 1
    assert finite_kernel(g, "Q", Fraction(1)) == []


def test_k2_kernels():
    g = make_graph("K2")
    (vec,) = finite_kernel(g, "Q", Fraction(1))
    assert vec[g.vertices[0]] == vec[g.vertices[1]] != 0
    assert finite_kernel(g, "Q", Fraction(0)) == []


def test_delta83_no_kernel_at_nonreal_root():
    K = field_make("nf:x^3+x^2-1")
    assert finite_kernel(make_graph("delta83"), K, K.generator("alpha")) == []


def test_complex_field_rejected():
    C = field_make("C")
    with pytest.raises(NotExactError):
        solve(system_from(C, ["x"], [({"x": 1.0}, 1.0)]), C)


def test_checks_reject_tampering():
    s = system_from(Q, ["x", "y"], [({"x": 1, "y": 1}, 2), ({"x": 1}, 1)])
    res = solve(s, Q)
    bad = Consistent({"x": Fraction(1), "y": Fraction(2)}, [], res.rank)
    with pytest.raises(VerificationError):
        bad.check(s, Q)
    s2 = system_from(Q, ["x"], [({"x": 1}, 1), ({"x": 2}, 3)])
    with pytest.raises(VerificationError):
        Inconsistent({0: Fraction(1), 1: Fraction(1)}, 1).check(s2, Q)


def test_json_export():
    s = system_from(Q, ["x"], [({"x": Fraction(1, 2)}, 1)])
    data = s.to_json(Q)
    assert data["rows"][0]["coeffs"] == [["x", "1/2"]]


# ---------------------------------------------------------------- random systems

@st.composite
def random_systems(draw, spec):
    F = field_make(spec)
    n = draw(st.integers(1, 6))
    m = draw(st.integers(0, 7))
    unknowns = [f"x({i})" for i in range(n)]
    rows = []
    for _ in range(m):
        coeffs = {u: draw(st.integers(-3, 3)) for u in unknowns if draw(st.booleans())}
        rows.append((coeffs, draw(st.integers(-2, 2))))
    return F, system_from(F, unknowns, rows)


@settings(max_examples=150, suppress_health_check=[HealthCheck.too_slow])
@given(random_systems("Q"))
def test_rank_nullity_over_q(case):
    F, s = case
    res = solve(s, F)
    if isinstance(res, Consistent):
        assert res.rank + len(res.kernel_basis) == len(s.unknowns)
    # sympy oracle on the augmented matrix
    sympy = pytest.importorskip("sympy")
    A = sympy.Matrix([[r.coeffs.get(u, 0) for u in s.unknowns] for r in s.rows]) if s.rows else None
    if A is None:
        assert isinstance(res, Consistent)
        return
    Ab = A.row_join(sympy.Matrix([r.rhs for r in s.rows]))
    assert isinstance(res, Consistent) == (A.rank() == Ab.rank())
    assert res.rank == A.rank()


@settings(max_examples=150, suppress_health_check=[HealthCheck.too_slow])
@given(random_systems("GF:7"))
def test_dense_gfp_matches_sparse(case):
    from graphprop.linalg import _solve_sparse, _solve_dense_gfp
    F, s = case
    a = _solve_dense_gfp(s, F, True)
    b = _solve_sparse(s, F, True)
    a.check(s, F)
    b.check(s, F)
    assert type(a) is type(b) and a.rank == b.rank
    if isinstance(a, Consistent):
        assert a.particular == b.particular
        assert a.kernel_basis == b.kernel_basis
    else:
        assert a.witness == b.witness


@pytest.mark.skipif(kernels.IMPLEMENTATION != "cython", reason="compiled kernel not built")
@given(st.integers(1, 12), st.integers(1, 12), st.sampled_from([2, 3, 5, 7, 101, 65521]), st.integers(0, 2**32 - 1))
def test_compiled_kernel_matches_fallback(m, n, p, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, p, size=(m, n + 1), dtype=np.int64)
    A, B = M.copy(), M.copy()
    assert kernels.rref_mod_p(A, p, n) == _gfp_py.rref_mod_p(B, p, n)
    assert np.array_equal(A, B)


def test_symmetric_inverse():
    g = make_graph("petersen")
    lam = Fraction(1, 3)
    cols = {}
    for v in g.vertices:
        res = solve(adjacency_system(g, Q, lam, {v: Q.one}), Q)
        cols[v] = res.particular
    for a in g.vertices:
        for b in g.vertices:
            assert cols[a].get(b, 0) == cols[b].get(a, 0)


# ---------------------------------------------------------------- minors

def test_k2_minors():
    m = char_matrix_minors([("a", "b")], 2)
    assert m[("a", "a")] == (0, -1) and m[("b", "b")] == (0, -1)
    assert m[("a", "b")] == (1,) and m[("b", "a")] == (1,)


def test_minors_need_two_vertices():
    with pytest.raises(ValueError):
        char_matrix_minors([], 1, vertices=["a"])


def test_det_poly_matches_sympy():
    sympy = pytest.importorskip("sympy")
    x = sympy.Symbol("x")
    for edges in ([(0, 1), (1, 2)], [(0, 1), (1, 2), (2, 0), (2, 3)], [(i, (i + 1) % 5) for i in range(5)]):
        n = len({v for e in edges for v in e})
        A = sympy.zeros(n, n)
        for a, b in edges:
            A[a, b] = A[b, a] = 1
        M = A - x * sympy.eye(n)
        minors = char_matrix_minors(edges, n)
        for (u, w), got in minors.items():
            want = sympy.Poly(M.minor_submatrix(u, w).det(), x).all_coeffs()[::-1]
            assert list(got) == [int(c) for c in want]
        from graphprop.linalg import char_matrix
        assert list(det_poly(char_matrix(edges, n)[0])) == [int(c) for c in sympy.Poly(M.det(), x).all_coeffs()[::-1]]


def test_path_p3_minors_nonzero():
    assert all(char_matrix_minors([(0, 1), (1, 2)], 3).values())


def test_connected_small_graphs_have_nonzero_minors():
    for G in connected_atlas(5, min_nodes=2):
        minors = char_matrix_minors(list(G.edges()), G.number_of_nodes(), list(G.nodes()))
        assert all(minors.values()), list(G.edges())


def test_disconnected_graph_has_zero_minor():
    m = char_matrix_minors([("a", "b"), ("c", "d")], 4)
    assert m[("a", "c")] == ()


def test_fallback_handles_empty_matrix():
    M = np.zeros((0, 3), dtype=np.int64)
    assert _gfp_py.rref_mod_p(M, 7, 2) == []


def test_fallback_selected_by_environment():
    import os
    import subprocess
    import sys
    env = dict(os.environ, GRAPHPROP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from graphprop import kernels; print(kernels.IMPLEMENTATION)"],
                         capture_output=True, text=True, env=env, check=True).stdout.strip()
    assert out == "python"
