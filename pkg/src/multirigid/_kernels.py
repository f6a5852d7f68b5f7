"""Backend selection for the hot kernels.

The compiled extension is used when it was built; setting
``MULTIRIGID_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("MULTIRIGID_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

has_clique = _impl.has_clique
enumerate_facets = _impl.enumerate_facets
flip_partner = _impl.flip_partner
det = _impl.det
solve = _impl.solve
first_positive = _impl.first_positive
best_positive = _impl.best_positive


def flip_oracle(cross, k):
    """Callable ``(mask, e) -> inserted index`` bound to one crossing table."""
    if BACKEND == "cython" and len(cross) <= 64:
        return _impl.FlipOracle(cross, k).partner
    cross = tuple(cross)
    return lambda mask, e: _pykernels.flip_partner(mask, e, cross, k)
