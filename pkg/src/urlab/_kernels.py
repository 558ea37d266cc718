"""Select the Jacobi kernel at import: compiled extension if built, else pure Python.

Set ``URLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _jacobi_py

BACKEND = "python"
jacobi_sweeps = _jacobi_py.jacobi_sweeps

if os.environ.get("URLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._jacobi_ext import jacobi_sweeps  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"
