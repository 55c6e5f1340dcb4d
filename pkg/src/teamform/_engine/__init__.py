"""Annealing kernel backend selection.

Imports the compiled extension when present, otherwise the pure-Python
twin.  Both implement the same frozen protocol and produce bit-identical
results; TEAMFORM_ENGINE=python|cython forces a choice (the benchmark and
the parity tests use this).
"""

import os

from . import engine_py

_forced = os.environ.get("TEAMFORM_ENGINE", "").strip().lower()

_cython = None
if _forced != "python":
    try:
        from . import _speedups as _cython  # type: ignore[attr-defined]
    except ImportError:
        _cython = None
        if _forced == "cython":
            raise ImportError(
                "TEAMFORM_ENGINE=cython but the compiled kernel is not built"
            )

if _forced == "python" or _cython is None:
    _impl = engine_py
    BACKEND = "python"
else:
    _impl = _cython
    BACKEND = "cython"

HAVE_CYTHON = _cython is not None

run_kernel = _impl.run_kernel


def backend_module(name: str):
    """Return a specific backend module ('python' or 'cython') for benchmarks."""
    if name == "python":
        return engine_py
    if name == "cython":
        if _cython is None:
            raise ImportError("compiled kernel not available")
        return _cython
    raise ValueError(f"unknown backend {name!r}")
