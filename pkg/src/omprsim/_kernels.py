"""Pick the flood kernel at import: compiled if built, else pure Python.

Set ``OMPRSIM_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _flood_py

BACKEND = "python"
flood = _flood_py.flood

if os.environ.get("OMPRSIM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _flood_core
    except ImportError:
        pass
    else:
        flood = _flood_core.flood
        BACKEND = "cython"
