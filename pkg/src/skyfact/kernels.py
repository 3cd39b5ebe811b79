"""Kernel backend selection.

The hot numeric loops exist twice: a compiled Cython extension
(``skyfact._ckernels``) and a pure-Python/numpy fallback
(``skyfact._pykernels``) with identical semantics. The compiled backend is
preferred when importable; set SKYFACT_KERNELS=py or =c to force one.
"""

from __future__ import annotations

import os

_choice = os.environ.get("SKYFACT_KERNELS", "auto").lower()

if _choice not in ("auto", "c", "py"):
    raise ValueError(f"SKYFACT_KERNELS must be auto, c, or py; got {_choice!r}")

if _choice in ("auto", "c"):
    try:
        from skyfact import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "c":
            raise
        from skyfact import _pykernels as _impl  # type: ignore[no-redef]
else:
    from skyfact import _pykernels as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
facts_matrix = _impl.facts_matrix
skyline_flags = _impl.skyline_flags
context_rows = _impl.context_rows


def load_backend(name: str):
    """Import a specific backend module (for benchmarks and cross-checks)."""
    if name == "c":
        from skyfact import _ckernels

        return _ckernels
    if name == "py":
        from skyfact import _pykernels

        return _pykernels
    raise ValueError(f"unknown kernel backend {name!r}")
