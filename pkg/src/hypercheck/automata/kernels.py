"""Kernel dispatch: compiled extension when importable, pure Python otherwise."""

from __future__ import annotations

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_MASK_LIMIT = 1 << 64

BACKEND = "cython" if _ckernels is not None else "python"
_impl = _ckernels or _pykernels


def use_backend(name: str) -> None:
    """Switch backend ("cython" or "python"); used by benchmarks and tests."""
    global BACKEND, _impl
    if name == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        _impl = _ckernels
    elif name == "python":
        _impl = _pykernels
    else:
        raise ValueError(name)
    BACKEND = name


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def partition_regions(cubes):
    if _impl is _pykernels:
        return _pykernels.partition_regions(cubes)
    for p, n in cubes:
        if p >= _MASK_LIMIT or n >= _MASK_LIMIT:
            return _pykernels.partition_regions(cubes)
    return _impl.partition_regions(cubes)


def tight_rankings(bounds, final, rank, limit=-1):
    return _impl.tight_rankings(bounds, final, rank, limit)


def scc_ids(adj):
    return _impl.scc_ids(adj)
