"""Selects the compiled kernels when available, the numpy fallback otherwise.

Set ``CONFLUENT_SUSY_PURE_PYTHON=1`` to force the fallback.
"""
import importlib
import os

_FORCE_PURE = os.environ.get("CONFLUENT_SUSY_PURE_PYTHON", "") not in ("", "0")


def load_backend(name):
    """Return the kernel module for ``name`` in {"cython", "python"}."""
    if name == "cython":
        return importlib.import_module("confluent_susy._kernels")
    if name == "python":
        return importlib.import_module("confluent_susy._kernels_py")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    if not _FORCE_PURE:
        try:
            return load_backend("cython"), "cython"
        except ImportError:
            pass
    return load_backend("python"), "python"


kernels, BACKEND = _select()
