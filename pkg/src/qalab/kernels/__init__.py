"""Monte-Carlo sampling kernels with backend selection at import time.

The compiled Cython kernel is preferred; the vectorized numpy fallback is
bit-for-bit equivalent.  Set ``QALAB_KERNEL=python`` (or ``cython``) to force
a backend; forcing ``cython`` raises if the extension is unavailable.

Kernel contract (both backends):
    trial seed   s = mix64(master + (i + 1) * GOLDEN)
    context draw r = mix64((s ^ ctx_key) + GOLDEN)
    uniform      u = (r >> 11) * 2**-53            in [0, 1)
    outcome      k = first index with cumweights[k] > u

Zero-probability branches (flat cumulative steps) are never selected, and
results for a trial range depend only on (master_seed, ctx_key, index), so
range splits merge associatively.
"""

import os

from . import _mc_py

_requested = os.environ.get("QALAB_KERNEL", "").strip().lower()

if _requested == "python":
    _impl = _mc_py
    BACKEND = "python"
else:
    try:
        from . import _mc_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _mc_py
        BACKEND = "python"

sample_counts = _impl.sample_counts
sample_indices = _impl.sample_indices


def backend_name() -> str:
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND
