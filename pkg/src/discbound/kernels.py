"""Backend selection for the critical-grid kernels.

The compiled ``_kernels`` extension is used when importable; otherwise,
or when ``DISCBOUND_PURE_PYTHON`` is set to a non-empty value other than
``0``, the NumPy implementation in ``_pykernels`` is used.  Both expose
``star_grid_max``, ``extreme_grid_max``, ``box_counts`` and
``grid_box_counts`` with identical results.
"""
from __future__ import annotations

import importlib
import os
from types import ModuleType

__all__ = ["BACKEND", "available_backends", "get_backend", "star_grid_max", "extreme_grid_max", "box_counts", "grid_box_counts"]

_MODULES = {"cython": "discbound._kernels", "python": "discbound._pykernels"}


def get_backend(name: str) -> ModuleType:
    """Import a specific backend by name (``"cython"`` or ``"python"``)."""
    try:
        return importlib.import_module(_MODULES[name])
    except KeyError:
        raise ValueError(f"unknown backend {name!r}") from None


def available_backends() -> list[str]:
    names = []
    for name in _MODULES:
        try:
            get_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select() -> tuple[str, ModuleType]:
    if os.environ.get("DISCBOUND_PURE_PYTHON", "") not in ("", "0"):
        return "python", get_backend("python")
    try:
        return "cython", get_backend("cython")
    except ImportError:
        return "python", get_backend("python")


BACKEND, _impl = _select()
star_grid_max = _impl.star_grid_max
extreme_grid_max = _impl.extreme_grid_max
box_counts = _impl.box_counts
grid_box_counts = _impl.grid_box_counts
