"""Kernel backend selection.

Two interchangeable implementations of the hot loops live here: a
numba-compiled one and a pure-numpy fallback. The BRIEFTRACE_KERNEL
environment variable picks the default ("numba", "numpy", or "auto"; auto
takes numba when importable). Tests and benchmarks can override the choice
temporarily with use_backend().
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from types import ModuleType

_VALID = ("auto", "numba", "numpy")
_forced: ModuleType | None = None
_default: ModuleType | None = None


def _load(name: str) -> ModuleType:
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    from . import numba_impl

    return numba_impl


def _resolve_default() -> ModuleType:
    global _default
    if _default is None:
        choice = os.environ.get("BRIEFTRACE_KERNEL", "auto").lower()
        if choice not in _VALID:
            raise ValueError(
                f"BRIEFTRACE_KERNEL must be one of {_VALID}, got {choice!r}"
            )
        if choice == "auto":
            try:
                _default = _load("numba")
            except ImportError:
                _default = _load("numpy")
        else:
            _default = _load(choice)
    return _default


def active() -> ModuleType:
    """The backend module currently in effect."""
    return _forced if _forced is not None else _resolve_default()


def backend_name() -> str:
    return "numba" if active().__name__.endswith("numba_impl") else "numpy"


@contextmanager
def use_backend(name: str):
    """Temporarily force a specific backend ("numba" or "numpy")."""
    global _forced
    previous = _forced
    _forced = _load(name)
    try:
        yield _forced
    finally:
        _forced = previous
