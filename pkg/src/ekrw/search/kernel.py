"""Kernel selection: the compiled core when it imports, the pure-Python one otherwise.

Set ``EKRW_PURE=1`` to force the pure-Python kernel at runtime.
"""
from __future__ import annotations

import os

from ._pycore import PyKernel, SearchAborted, Tables, root_state  # noqa: F401

try:
    from ._core import CKernel
except ImportError:  # extension not built
    CKernel = None

BACKENDS = ("compiled", "python")


def available_backends() -> list[str]:
    return [b for b in BACKENDS if b == "python" or CKernel is not None]


def default_backend() -> str:
    if CKernel is None or os.environ.get("EKRW_PURE", "") not in ("", "0"):
        return "python"
    return "compiled"


def make_kernel(backend: str, tables: Tables, **kw):
    if backend == "compiled":
        if CKernel is None:
            raise RuntimeError("compiled kernel is not available; reinstall with Cython present")
        return CKernel(tables, **kw)
    if backend == "python":
        return PyKernel(tables, **kw)
    raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
