"""Backend selection: compiled extension if available, pure Python otherwise.

Set FREELIKE_PURE=1 to force the pure backend (used by the benchmark and the
backend-equivalence tests).  Both backends are bit-identical in results; only
speed differs.
"""

from __future__ import annotations

import os

if os.environ.get("FREELIKE_PURE") == "1":
    from freelike import _purekernels as _impl
else:
    try:
        from freelike import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from freelike import _purekernels as _impl

BACKEND: str = _impl.BACKEND
scan_reduced_subtree = _impl.scan_reduced_subtree
crossing_from_uniforms = _impl.crossing_from_uniforms
component_labels = _impl.component_labels
