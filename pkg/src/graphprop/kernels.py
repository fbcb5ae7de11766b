"""Hot-loop kernels: the compiled extension when built, else pure Python.

Set ``GRAPHPROP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from graphprop import _gfp_py

IMPLEMENTATION = "python"
rref_mod_p = _gfp_py.rref_mod_p

if not os.environ.get("GRAPHPROP_PURE_PYTHON"):
    try:
        from graphprop import _gfp  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        rref_mod_p = _gfp.rref_mod_p
        IMPLEMENTATION = "cython"
