"""Backend selection for the hot loops.

The compiled extension ``zpd._core`` is used when it imports; otherwise the
numpy implementation in ``zpd._pycore`` takes over.  Set ``ZPD_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os

from . import _pycore

if os.environ.get("ZPD_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pycore
        BACKEND = "python"

rs_z = _impl.rs_z
em_zeta = _impl.em_zeta
bump_eval = _impl.bump_eval
osc_panels = _impl.osc_panels
kahan_sum = _impl.kahan_sum
fnv1a64 = _impl.fnv1a64

__all__ = ["BACKEND", "rs_z", "em_zeta", "bump_eval", "osc_panels", "kahan_sum", "fnv1a64"]
