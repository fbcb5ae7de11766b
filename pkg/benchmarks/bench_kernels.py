"""Compare the compiled GF(p) row reduction with the pure-Python fallback.

    python benchmarks/bench_kernels.py --sizes 50 100 200 --prime 32003

Also times a full classification (exact solves over GF(101)) with each kernel.
"""

import argparse
import timeit

import numpy as np

from graphprop import _gfp_py

try:
    from graphprop import _gfp
except ImportError:  # extension not built
    _gfp = None


def random_matrix(m: int, n: int, p: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, p, size=(m, n + 1), dtype=np.int64)


def bench(fn, M, p, n, repeat: int) -> float:
    times = timeit.repeat(lambda: fn(M.copy(), p, n), number=1, repeat=repeat)
    return min(times)


def bench_classify(repeat: int) -> dict:
    import importlib
    import os

    from graphprop import kernels, linalg

    out = {}
    for label, env in (("cython", None), ("python", "1")):
        if label == "cython" and _gfp is None:
            continue
        if env:
            os.environ["GRAPHPROP_PURE_PYTHON"] = env
        else:
            os.environ.pop("GRAPHPROP_PURE_PYTHON", None)
        importlib.reload(kernels)
        linalg.kernels = kernels
        from graphprop.balls import classify_vertex
        from graphprop.zoo import make_graph

        g = make_graph("blocks16_84")
        out[label] = min(timeit.repeat(lambda: classify_vertex(g, "GF:101", 0, "u(0,10)", 9), number=1, repeat=repeat))
    os.environ.pop("GRAPHPROP_PURE_PYTHON", None)
    importlib.reload(kernels)
    linalg.kernels = kernels
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _gfp is None:
        print("compiled extension not available; timing the fallback only")
    print(f"{'size':>6} {'python [s]':>12} {'cython [s]':>12} {'speedup':>8}")
    for n in args.sizes:
        M = random_matrix(n, n, args.prime, args.seed)
        if _gfp is not None:
            A, B = M.copy(), M.copy()
            assert _gfp.rref_mod_p(A, args.prime, n) == _gfp_py.rref_mod_p(B, args.prime, n)
            assert np.array_equal(A, B)
        t_py = bench(_gfp_py.rref_mod_p, M, args.prime, n, args.repeat)
        if _gfp is None:
            print(f"{n:>6} {t_py:>12.4f} {'-':>12} {'-':>8}")
            continue
        t_c = bench(_gfp.rref_mod_p, M, args.prime, n, args.repeat)
        print(f"{n:>6} {t_py:>12.4f} {t_c:>12.4f} {t_py / t_c:>7.1f}x")

    res = bench_classify(args.repeat)
    print("classify blocks16_84 u(0,10) at 0 over GF(101), r_max 9:",
          ", ".join(f"{k} {v:.3f}s" for k, v in res.items()))


if __name__ == "__main__":
    main()
