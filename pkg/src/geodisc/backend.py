"""Backend selection for the hot series loops.

Set ``GEODISC_BACKEND=numpy`` to force the pure-numpy fallbacks, or
``GEODISC_BACKEND=numba`` to require the jitted kernels (ImportError if
numba is missing).  Default: numba when importable, numpy otherwise.
"""

import os

_CHOICE = os.environ.get("GEODISC_BACKEND", "").strip().lower()

if _CHOICE not in ("", "numba", "numpy"):
    raise ValueError(f"GEODISC_BACKEND must be 'numba' or 'numpy', got {_CHOICE!r}")

if _CHOICE == "numpy":
    _name = "numpy"
else:
    try:
        from . import _series_numba  # noqa: F401
        _name = "numba"
    except ImportError:
        if _CHOICE == "numba":
            raise
        _name = "numpy"

if _name == "numba":
    from ._series_numba import (
        radial_coefficients,
        squared_poly_sums,
        zonal_series_pair,
        zonal_sum_table,
    )
else:
    from ._series_numpy import (
        radial_coefficients,
        squared_poly_sums,
        zonal_series_pair,
        zonal_sum_table,
    )


def active_backend() -> str:
    """Name of the backend serving the hot loops: 'numba' or 'numpy'."""
    return _name


__all__ = [
    "active_backend",
    "radial_coefficients",
    "zonal_series_pair",
    "zonal_sum_table",
    "squared_poly_sums",
]
