"""Kernel dispatch: prefer the compiled extension, fall back to pure Python.

Set NCX_PURE=1 to force the pure-Python kernel (used by the benchmark to
compare both).  ``IMPLEMENTATION`` records which one is active.
"""

import os

if os.environ.get("NCX_PURE") == "1":
    from ncx import _kernel as _impl

    IMPLEMENTATION = "pure"
else:
    try:
        from ncx import _speedups as _impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "compiled"
    except ImportError:
        from ncx import _kernel as _impl

        IMPLEMENTATION = "pure"

REL_EQ = _impl.REL_EQ
REL_LE = _impl.REL_LE
REL_LT = _impl.REL_LT

iprim = _impl.iprim
qvec_to_ivec = _impl.qvec_to_ivec
idot = _impl.idot
rref = _impl.rref
rank_int = _impl.rank_int
nullspace = _impl.nullspace
fm_feasible = _impl.fm_feasible
dd_cone = _impl.dd_cone
