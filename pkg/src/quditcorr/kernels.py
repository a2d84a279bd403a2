"""Backend selection for the CHSH hot loop.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
numpy implementation in ``_pykernels``.  Set ``QUDITCORR_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
if os.environ.get("QUDITCORR_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
chsh_angles = _impl.chsh_angles
chsh_batch = _impl.chsh_batch
nelder_mead = _impl.nelder_mead


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True


def get_backend(name: str):
    """Return the kernel module called ``name`` (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
