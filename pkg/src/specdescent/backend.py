"""Selection of the Jacobi sweep kernel at import time.

The compiled extension is preferred; the pure-Python kernel is the
fallback. SPECDESCENT_BACKEND=python|compiled forces the choice
(``compiled`` raises if the extension is missing).
"""

import os

from . import _jacobi_py

_choice = os.environ.get("SPECDESCENT_BACKEND", "auto").strip().lower() or "auto"

if _choice not in ("auto", "compiled", "python"):
    raise ValueError(
        f"SPECDESCENT_BACKEND must be 'auto', 'compiled' or 'python', got {_choice!r}"
    )

if _choice == "python":
    jacobi_sweeps = _jacobi_py.jacobi_sweeps
    BACKEND = "python"
else:
    try:
        from . import _jacobi
        jacobi_sweeps = _jacobi.jacobi_sweeps
        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        jacobi_sweeps = _jacobi_py.jacobi_sweeps
        BACKEND = "python"
