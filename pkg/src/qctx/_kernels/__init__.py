"""Kernel backend selection.

The compiled extension is used when it imported cleanly; otherwise (or when
``QCTX_PURE_PYTHON`` is set to a non-empty value) the pure-Python kernels
take over.  Both expose the same functions with the same semantics.
"""

from __future__ import annotations

import os

from . import _pure

try:
    from . import _core
except ImportError:  # extension not built on this installation
    _core = None

if _core is not None and not os.environ.get("QCTX_PURE_PYTHON"):
    _active = _core
    BACKEND = "compiled"
else:
    _active = _pure
    BACKEND = "pure-python"

jacobi_eigh = _active.jacobi_eigh
sample_counts = _active.sample_counts
splitmix64_next = _pure.splitmix64_next

__all__ = ["BACKEND", "jacobi_eigh", "sample_counts", "splitmix64_next"]
