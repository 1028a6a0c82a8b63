"""Kernel backend selection.

The compiled extension ``splitmi._kernels_cy`` is preferred; the numpy
reference ``splitmi._kernels_py`` is the fallback.  Selection happens
once at import and can be forced with ``SPLITMI_BACKEND`` set to
``cython`` or ``python`` (``auto`` is the default).  Both backends
implement identical reductions; results agree to roundoff, not bit for
bit, so a given install is deterministic but the two backends are not
interchangeable within one reproducibility contract.
"""

from __future__ import annotations

import os

from . import _kernels_py

_choice = os.environ.get("SPLITMI_BACKEND", "auto").lower()

if _choice not in ("auto", "cython", "python"):
    raise RuntimeError(f"SPLITMI_BACKEND must be auto|cython|python, got {_choice!r}")

if _choice == "python":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise RuntimeError(
                "SPLITMI_BACKEND=cython but the compiled extension is not available"
            ) from None
        kernels = _kernels_py
        BACKEND = "python"


def backend_name() -> str:
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND
