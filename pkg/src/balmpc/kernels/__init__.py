"""Settlement pricing kernels with a compiled core and a numpy fallback.

The compiled extension is preferred when it imported cleanly; set
``BALMPC_PURE=1`` to force the numpy implementation. Both backends are
bit-compatible, so the choice only affects throughput.
"""

import os

from . import pure

_BACKENDS = {"pure": pure}

try:
    from . import _core

    _BACKENDS["cython"] = _core
except ImportError:
    _core = None

if os.environ.get("BALMPC_PURE"):
    _active = pure
else:
    _active = _core if _core is not None else pure


def active_backend():
    return _active


def backend_name() -> str:
    return _active.BACKEND_NAME


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name: str):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise KeyError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None


def use(name: str):
    """Switch the process-wide backend; returns the previous one."""
    global _active
    previous = _active
    _active = get_backend(name)
    return previous


def marginal_prices(*args):
    return _active.marginal_prices(*args)


def qh_prices_for_deltas(*args):
    return _active.qh_prices_for_deltas(*args)
