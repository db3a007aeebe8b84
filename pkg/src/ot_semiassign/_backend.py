"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module.  Set ``OT_SEMIASSIGN_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

if os.environ.get("OT_SEMIASSIGN_PURE_PYTHON") or _compiled is None:
    DEFAULT = "python"
else:
    DEFAULT = "cython"


def available():
    return sorted(_BACKENDS)


def get(name=None):
    name = name or DEFAULT
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available()}") from None
