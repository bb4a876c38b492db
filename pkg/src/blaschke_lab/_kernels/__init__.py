"""Backend selection for the hot numeric kernels.

The environment variable ``BLASCHKE_LAB_BACKEND`` picks the implementation:

* ``numba`` -- require the jitted kernels (raise if numba is unavailable),
* ``numpy`` -- force the pure-numpy fallback,
* unset/``auto`` -- use numba when importable, numpy otherwise.

``benchmarks/bench_backends.py`` times the two implementations against each
other; both are importable directly as ``numpy_impl`` / ``numba_impl``.
"""

import os
import warnings

from . import _numpy as numpy_impl

_choice = os.environ.get("BLASCHKE_LAB_BACKEND", "auto").strip().lower()

numba_impl = None
if _choice in ("auto", "numba"):
    try:
        from . import _numba as numba_impl
    except ImportError:
        if _choice == "numba":
            raise
        warnings.warn("numba unavailable, falling back to the numpy kernels")
elif _choice != "numpy":
    raise ValueError(
        f"BLASCHKE_LAB_BACKEND={_choice!r} not recognised "
        "(expected 'auto', 'numba' or 'numpy')"
    )

_impl = numba_impl if numba_impl is not None else numpy_impl

BACKEND = _impl.NAME

poly_eval = _impl.poly_eval
poly_jet = _impl.poly_jet
newton_eval = _impl.newton_eval
newton_jet = _impl.newton_jet
jet_mul = _impl.jet_mul
jet_div = _impl.jet_div
blaschke_jet = _impl.blaschke_jet
cauchy_jet = _impl.cauchy_jet
blaschke_prod_eval = _impl.blaschke_prod_eval
blaschke_prod_jet = _impl.blaschke_prod_jet

__all__ = [
    "BACKEND",
    "numpy_impl",
    "numba_impl",
    "poly_eval",
    "poly_jet",
    "newton_eval",
    "newton_jet",
    "jet_mul",
    "jet_div",
    "blaschke_jet",
    "cauchy_jet",
    "blaschke_prod_eval",
    "blaschke_prod_jet",
]
