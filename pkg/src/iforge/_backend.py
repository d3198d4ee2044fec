"""Pick the search kernel at import time.

The compiled extension is used when it was built; setting ``IFORGE_PURE=1``
forces the pure-Python kernel.
"""

from __future__ import annotations

import os

from iforge import _search_py

if os.environ.get("IFORGE_PURE"):
    search_kernel = _search_py.search_kernel
    BACKEND = "python"
else:
    try:
        from iforge._search_ext import search_kernel
    except ImportError:
        search_kernel = _search_py.search_kernel
        BACKEND = "python"
    else:
        BACKEND = "cython"
