"""Kernel backend selection.

Prefers the compiled extension ``_kernels_cy`` and falls back to the numpy
module ``_kernels_np``. Setting FIREFRONT_BACKEND=numpy or =cython forces a
choice (forcing cython raises if the extension was not built). The variable
is optional; nothing in the package requires it.
"""

import os

_choice = os.environ.get("FIREFRONT_BACKEND", "").strip().lower()
if _choice not in ("", "numpy", "cython"):
    raise ImportError(
        f"FIREFRONT_BACKEND must be 'numpy' or 'cython', got {_choice!r}"
    )

if _choice == "numpy":
    from . import _kernels_np as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        from . import _kernels_np as _impl

        BACKEND = "numpy"

laplacian = _impl.laplacian
gradient = _impl.gradient
window_correlate = _impl.window_correlate
shift_apply = _impl.shift_apply
cg_shifted_poisson = _impl.cg_shifted_poisson
