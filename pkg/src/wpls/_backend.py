"""Kernel backend selection.

The compiled extension ``wpls._kernels`` is preferred; the pure-Python
``wpls._pykernels`` is used when it is missing or when the environment
variable ``WPLS_BACKEND=python`` is set. ``WPLS_BACKEND=compiled`` makes a
missing extension an import error instead of a silent fallback.
"""

import contextlib
import importlib
import os
from types import ModuleType

_MODULES = {"compiled": "wpls._kernels", "python": "wpls._pykernels"}


def load(name: str) -> ModuleType:
    """Import the kernel module for backend ``name`` ("compiled" or "python")."""
    try:
        return importlib.import_module(_MODULES[name])
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_MODULES)}") from None


def available() -> list[str]:
    names = []
    for name in _MODULES:
        try:
            load(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _initial() -> tuple[str, ModuleType]:
    requested = os.environ.get("WPLS_BACKEND", "auto").lower()
    if requested != "auto":
        return requested, load(requested)
    try:
        return "compiled", load("compiled")
    except ImportError:
        return "python", load("python")


name, kernels = _initial()


def set_backend(new: str) -> None:
    global name, kernels
    kernels = load(new)
    name = new


@contextlib.contextmanager
def use_backend(new: str):
    """Temporarily switch backends. Not thread-safe; meant for tests and benchmarks."""
    old = name
    set_backend(new)
    try:
        yield kernels
    finally:
        set_backend(old)
