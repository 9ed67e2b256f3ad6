"""Hot-kernel backend selection.

Imports the compiled extension when it was built, otherwise the NumPy
fallback. ``CORPUSFORGE_PURE=1`` forces the fallback (used by the kernel
benchmark and for debugging). ``BACKEND`` reports the active choice.
"""

import os

from . import pure
from .pure import LABEL_IGNORE

if os.environ.get("CORPUSFORGE_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl
        BACKEND = "native"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

greedy_dedup_scan = _impl.greedy_dedup_scan
mask_fill = _impl.mask_fill

__all__ = ["BACKEND", "LABEL_IGNORE", "greedy_dedup_scan", "mask_fill", "pure"]
