"""Select the compiled kernel backend, falling back to pure numpy.

Set PAIGELOOPS_BACKEND=py to force the fallback (useful for timing
comparisons and for debugging the compiled code against it).
"""

import os

if os.environ.get("PAIGELOOPS_BACKEND") == "py":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels


def backend_name():
    return kernels.backend_name()
