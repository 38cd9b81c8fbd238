"""Scoring-backend selection.

The compiled kernel is preferred when its extension module importable; the
pure-Python kernel is the fallback and the reference implementation. Set
ITEMCERT_PURE_PYTHON=1 to force the fallback (used by tests and benchmarks).
"""

from __future__ import annotations

import os

from itemcert.taxonomy import _scoring_py


def _select():
    if os.environ.get("ITEMCERT_PURE_PYTHON", "") not in ("", "0"):
        return _scoring_py
    try:
        from itemcert.taxonomy import _scoring_cy  # compiled extension

        return _scoring_cy
    except ImportError:
        return _scoring_py


kernel = _select()
BACKEND = kernel.BACKEND_NAME


def available_backends() -> dict:
    """All importable kernels by name; used by parity tests and benchmarks."""
    backends = {"python": _scoring_py}
    try:
        from itemcert.taxonomy import _scoring_cy

        backends["cython"] = _scoring_cy
    except ImportError:
        pass
    return backends
