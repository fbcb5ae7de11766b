import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphprop.fields import field_make
from graphprop.balls import propagator_with_support_in
from graphprop.graph import bfs_layers
from graphprop.resolvent import (
    distance_to_segment, resolvent_scan, scan_to_csv, truncated_resolvent,
)
from graphprop.series import DomainError, UnsupportedError, eval_green
from graphprop.zoo import chain_green_closed_form, make_graph


@pytest.mark.parametrize("radial", [True, False])
@pytest.mark.parametrize("lam", [3, 1j, -2.5, 0.3 + 0.5j])
def test_chain_closed_form(lam, radial):
    approx = truncated_resolvent(make_graph("chain"), lam, "v(0)", 40, radial=radial)
    for k in (0, 1, 3):
        assert abs(approx.value(f"v({k})") - chain_green_closed_form(lam, k)) < 1e-8


def test_closed_form_values():
    approx = truncated_resolvent(make_graph("chain"), 3, "v(0)", 40)
    assert approx.value("v(0)") == pytest.approx(-0.4472136, abs=1e-7)
    approx = truncated_resolvent(make_graph("chain"), 1j, "v(0)", 40)
    assert approx.value("v(0)") == pytest.approx(0.4472136j, abs=1e-7)


def test_radial_matches_explicit_on_tree():
    g = make_graph("tree3")
    a = truncated_resolvent(g, 2 + 1j, "t()", 7, radial=True)
    b = truncated_resolvent(g, 2 + 1j, "t()", 7, radial=False)
    for w in bfs_layers(g, "t()", 7):
        assert abs(a.value(w) - b.value(w)) < 1e-12


def test_agrees_with_series():
    g = make_graph("chain")
    approx = truncated_resolvent(g, 2.5, "v(0)", 60)
    for k in range(4):
        gv = eval_green(g, 2.5, "v(0)", f"v({k})")
        assert abs(approx.value(f"v({k})") - gv.value) <= gv.tail_bound + approx.cauchy_delta + 1e-12


def test_domain_errors():
    g = make_graph("chain")
    with pytest.raises(DomainError):
        truncated_resolvent(g, 1.5 + 1e-5j, "v(0)", 10)
    with pytest.raises(ValueError):
        truncated_resolvent(g, 3, "v(0)", -1)
    with pytest.raises(UnsupportedError):
        truncated_resolvent(make_graph("cubic_83"), 4, "u(0,1)", 3, radial=True)
    assert distance_to_segment(3, 2) == 1
    assert distance_to_segment(1 + 2j, 2) == 2


@settings(max_examples=25, deadline=None)
@given(st.floats(-4, 4), st.floats(0.05, 3))
def test_conjugation_symmetry(re, im):
    g = make_graph("cubic_83")
    lam = complex(re, im)
    a = truncated_resolvent(g, lam, "u(0,1)", 6)
    b = truncated_resolvent(g, lam.conjugate(), "u(0,1)", 6)
    for w, val in a.values.items():
        assert abs(b.values[w] - val.conjugate()) < 1e-12


def test_truncation_symmetry():
    # same finite matrix inverted from both ends: restrict to a common ball
    g = make_graph("blocks16_84")
    lam = 0.5 + 1j
    a = truncated_resolvent(g, lam, "u(0,1)", 5)
    X = set(a.values)
    from scipy.sparse.linalg import spsolve
    from scipy.sparse import lil_matrix
    verts = sorted(X)
    idx = {u: i for i, u in enumerate(verts)}
    M = lil_matrix((len(verts), len(verts)), dtype=complex)
    for u in verts:
        M[idx[u], idx[u]] = -lam
        for w in g.neighbors(u):
            if w in idx:
                M[idx[u], idx[w]] = 1
    M = M.tocsc()
    for w in verts[:10]:
        e = np.zeros(len(verts), dtype=complex)
        e[idx[w]] = 1
        col = spsolve(M, e)
        assert abs(col[idx["u(0,1)"]] - a.values[w]) < 1e-12


def test_cauchy_delta_decreases():
    g = make_graph("chain")
    deltas = [truncated_resolvent(g, 0.5 + 0.5j, "v(0)", r).cauchy_delta for r in (8, 16, 32, 64)]
    assert all(b < a for a, b in zip(deltas, deltas[1:]))


def test_bound_outside_disc():
    g = make_graph("tree3")
    for lam in (3.5, -4, 3 + 2j):
        approx = truncated_resolvent(g, lam, "t()", 12)
        assert abs(approx.value("t()")) <= 1 / (abs(lam) - 3) + approx.cauchy_delta


def test_scan_circle_and_skip():
    g = make_graph("chain")
    grid = [3 * cmath.exp(2j * cmath.pi * k / 12) for k in range(12)] + [1.0]
    rows = resolvent_scan(g, "v(0)", "v(0)", grid, 40, jobs=2)
    assert rows[-1].skipped and rows[-1].value is None
    for row in rows[:-1]:
        assert abs(row.value - chain_green_closed_form(row.lam, 0)) < 1e-6
    text = scan_to_csv(rows).splitlines()
    assert text[0] == "re_lambda,im_lambda,re_value,im_value,cauchy_delta"
    assert text[-1].endswith("skipped,skipped,skipped")


def test_cubic_block_far_values_small_near_root():
    # at the nonreal root of x^3 + x^2 - 1 the propagator from u(0,1) has finite support
    K = field_make("nf:x^3+x^2-1")
    g = make_graph("cubic_83")
    alpha = complex(np.roots([1, 1, 0, -1])[np.argmax(np.roots([1, 1, 0, -1]).imag)])
    cert = propagator_with_support_in(g, K, K.generator("alpha"), bfs_layers(g, "u(0,1)", 3), "u(0,1)")
    assert cert is not None
    far = "u(3,4)"
    assert far not in cert.p.entries
    approx = truncated_resolvent(g, alpha, "u(0,1)", 30)
    assert abs(approx.value(far)) < 1e-8
    assert abs(truncated_resolvent(g, alpha + 0.3, "u(0,1)", 30).value(far)) > 1e-6
