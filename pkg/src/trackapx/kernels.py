"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The Cython extension ``_ckernels`` packs vertex sets into C uint64 words and
is therefore limited to 64 vertices; larger graphs (and builds without the
extension) route through ``_kernels_py``, which uses Python integers as
bitsets of unbounded width.  Set TRACKAPX_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py as _py

if os.environ.get("TRACKAPX_PURE"):
    _c = None
else:
    try:
        from . import _ckernels as _c  # type: ignore[attr-defined]
    except ImportError:
        _c = None

COMPILED = _c is not None
_WORD = 64


def backend_name(n: int = 0) -> str:
    return "compiled" if (COMPILED and n <= _WORD) else "pure"


def _pick(n: int):
    return _c if (COMPILED and n <= _WORD) else _py


def full_mask(n: int) -> int:
    return (1 << n) - 1


def is_forest(masks, alive=None) -> bool:
    n = len(masks)
    a = full_mask(n) if alive is None else alive
    return _pick(n).is_forest(list(masks), a)


def reachable(masks, alive, src: int) -> int:
    n = len(masks)
    a = full_mask(n) if alive is None else alive
    return _pick(n).reachable(list(masks), a, src)


def st_paths(masks, s: int, t: int, alive=None, cap: int = 2_000_000):
    n = len(masks)
    a = full_mask(n) if alive is None else alive
    return _pick(n).st_paths(list(masks), s, t, a, cap)


def simple_cycles(masks, alive=None, cap: int = 1_000_000):
    n = len(masks)
    a = full_mask(n) if alive is None else alive
    return _pick(n).simple_cycles(list(masks), a, cap)


def disjoint_paths(masks, a1: int, b1: int, a2: int, b2: int, alive=None) -> bool:
    n = len(masks)
    a = full_mask(n) if alive is None else alive
    return _pick(n).disjoint_paths(list(masks), a, a1, b1, a2, b2)
