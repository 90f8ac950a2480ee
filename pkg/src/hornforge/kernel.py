"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set HORNFORGE_KERNEL=py to force the fallback (used by the parity tests and
the benchmark); any other value, or unset, prefers the extension.
"""

import os

from . import _fckernel_py

_forced = os.environ.get("HORNFORGE_KERNEL", "").lower()

if _forced in ("py", "python", "pure"):
    _impl = _fckernel_py
else:
    try:
        from . import _fckernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fckernel_py

Formula = _impl.Formula
KERNEL_NAME = "cython" if _impl is not _fckernel_py else "python"

PY_FORMULA = _fckernel_py.Formula
