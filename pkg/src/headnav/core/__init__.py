"""Tick-loop backends: a compiled extension and its pure-Python reference.

The two backends are bit-for-bit interchangeable; the compiled one is just
fast. HEADNAV_BACKEND=pure or =compiled forces the choice, the default
(auto) prefers the compiled extension and falls back silently when it is
not built.
"""

from __future__ import annotations

import importlib
import os

from . import params, pure  # noqa: F401 (params re-exported for the engine)

_REQUESTED = os.environ.get("HEADNAV_BACKEND", "auto").strip().lower() or "auto"
if _REQUESTED not in ("auto", "pure", "compiled"):
    raise ValueError(
        f"HEADNAV_BACKEND must be 'pure', 'compiled' or unset, got {_REQUESTED!r}")

_compiled = None
if _REQUESTED in ("auto", "compiled"):
    # importlib, not a from-import: the latter would hand back this module's
    # own _compiled attribute instead of loading the extension.
    try:
        _compiled = importlib.import_module("._compiled", __name__)
    except ImportError as exc:
        if _REQUESTED == "compiled":
            raise ImportError(
                "HEADNAV_BACKEND=compiled but headnav.core._compiled is not built") from exc

BACKEND = "pure" if _compiled is None else "compiled"
run_kernel = pure.run_kernel if _compiled is None else _compiled.run_kernel
