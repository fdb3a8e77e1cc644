"""Gate-kernel backend selection.

The compiled extension is preferred when it imports; the pure-numpy
fallback is always available.  Set PROBCLONE_KERNEL to "compiled" or
"python" to force a backend ("auto" is the default and picks compiled
when built).
"""

import os
import warnings

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

_requested = os.environ.get("PROBCLONE_KERNEL", "auto").strip().lower()
if _requested not in ("auto", "compiled", "python"):
    warnings.warn(
        "unknown PROBCLONE_KERNEL=%r, falling back to auto" % _requested,
        RuntimeWarning,
    )
    _requested = "auto"

if _requested in ("auto", "compiled"):
    try:
        from . import _kernels as _compiled

        _impl = _compiled
        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "PROBCLONE_KERNEL=compiled but the extension is not built; "
                "reinstall the package or use PROBCLONE_KERNEL=python"
            )

apply_single = _impl.apply_single
apply_x = _impl.apply_x
apply_cnot = _impl.apply_cnot
apply_controlled = _impl.apply_controlled


def available_backends():
    """Name -> module for every importable backend (for tests/benchmarks)."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as compiled_mod

        out["compiled"] = compiled_mod
    except ImportError:
        pass
    return out
