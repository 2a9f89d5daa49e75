"""Kernel backend selection.

Hot inner loops (sphere enumeration, weighted pair-sum counting) exist in two
implementations: a numba @njit version and a pure-numpy version.  The active
backend is picked once at import time from the environment variable
``LATENERGY_BACKEND`` ("numba" or "numpy").  Default is numba when it imports
cleanly, numpy otherwise.  Both backends are exact and bit-identical; the
benchmark in bench/compare_backends.py times them against each other.
"""

import os

_ENV_VAR = "LATENERGY_BACKEND"
_VALID = ("numba", "numpy")


def requested_backend() -> str:
    name = os.environ.get(_ENV_VAR, "").strip().lower()
    if name and name not in _VALID:
        raise ValueError(
            f"{_ENV_VAR}={name!r}: expected one of {_VALID}"
        )
    return name


def _load():
    name = requested_backend()
    if name == "numpy":
        from . import _kernels_numpy as mod
        return mod, "numpy"
    if name == "numba":
        from . import _kernels_numba as mod
        return mod, "numba"
    # auto
    try:
        from . import _kernels_numba as mod
        return mod, "numba"
    except ImportError:
        from . import _kernels_numpy as mod
        return mod, "numpy"


kernels, active_backend = _load()
