"""Backend selection for the hot kernels.

The compiled module ``_ckernels`` is used when it was built; otherwise the
numpy implementations in ``_pykernels`` are used.  Setting the environment
variable ``ALGROUPS_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
BACKEND = "python"

if not os.environ.get("ALGROUPS_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "cython"
else:
    _compiled = None


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def use_backend(name: str) -> None:
    """Switch the active backend at runtime (used by tests and benchmarks)."""
    global _impl, BACKEND
    if name == "python":
        _impl = _pykernels
    elif name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        _impl = _compiled
    else:
        raise ValueError(name)
    BACKEND = name


def _pick(width):
    # zero-dimensional algebras only occur as trivial subgroups
    return _impl if width else _pykernels


def alg_mul(x, y, terms, add, mul):
    return _pick(x.shape[1]).alg_mul(x, y, terms, add, mul)


def grp_mul(x, y, terms, add, mul):
    return _pick(x.shape[1]).grp_mul(x, y, terms, add, mul)


def grp_inv(x, terms, add, mul, neg, nclass):
    return _pick(x.shape[1]).grp_inv(x, terms, add, mul, neg, nclass)


def grp_conj(x, g, terms, add, mul, neg, nclass):
    return _pick(x.shape[1]).grp_conj(x, g, terms, add, mul, neg, nclass)


def grp_comm(x, y, terms, add, mul, neg, nclass):
    return _pick(x.shape[1]).grp_comm(x, y, terms, add, mul, neg, nclass)


def unipotent_det(scal, nil, terms, add, mul, neg, inv, nclass):
    return _pick(nil.shape[-1]).unipotent_det(scal, nil, terms, add, mul, neg, inv, nclass)
