"""Exact arithmetic kernel with a compiled fast path.

The compiled extension ``_fast`` (Cython) is preferred; the pure-Python twin
``_pure`` is selected when the extension is unavailable or when the
environment variable ``AHODGE_PURE`` is set.  Both expose the same names.
"""

import os

if os.environ.get("AHODGE_PURE"):
    from ._pure import I, ONE, ZERO, Scalar, rref_rows

    BACKEND = "pure"
else:
    try:
        from ._fast import I, ONE, ZERO, Scalar, rref_rows

        BACKEND = "compiled"
    except ImportError:
        from ._pure import I, ONE, ZERO, Scalar, rref_rows

        BACKEND = "pure"

__all__ = ["Scalar", "rref_rows", "ZERO", "ONE", "I", "BACKEND"]
