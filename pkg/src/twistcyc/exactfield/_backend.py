"""Select the elimination kernel at import time.

The compiled ``_elim`` extension is used when it was built; setting the
environment variable ``TWISTCYC_PURE_PYTHON=1`` forces the pure-Python kernel.
"""
import os

from ._elim_py import _combine_field as combine_field
from ._elim_py import _normalize_field as normalize_field
from ._elim_py import echelon_field
from ._elim_py import echelon_int as echelon_int_py

BACKEND = "python"
echelon_int = echelon_int_py

if os.environ.get("TWISTCYC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._elim import echelon_int as _compiled
    except ImportError:  # extension not built
        pass
    else:
        echelon_int = _compiled
        BACKEND = "compiled"

__all__ = ["BACKEND", "combine_field", "echelon_field", "echelon_int", "echelon_int_py", "normalize_field"]
