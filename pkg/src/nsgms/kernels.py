"""Backend selection for the subset-scan kernel.

The compiled Cython kernel is preferred when the extension built; the
numpy implementation is the fallback and the reference.  Setting the
environment variable ``NSGMS_PURE_PYTHON=1`` forces the fallback, which
the test suite and the benchmark use to compare both routes.
"""

from __future__ import annotations

import os

from . import _scan_py

if os.environ.get("NSGMS_PURE_PYTHON") == "1":
    _impl = _scan_py
else:
    try:
        from . import _scan_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _scan_py

subset_objectives = _impl.subset_objectives


def scan_backend() -> str:
    """Name of the active kernel backend ("cython" or "python")."""
    return _impl.BACKEND
