"""JIT selection.

Kernels are written in the subset of Python that numba compiles. Setting
``DIMOTIF_DISABLE_NUMBA=1`` (or running without numba installed) makes every
``njit`` a no-op so the same kernels execute as plain Python over numpy arrays.
"""
import os

_FLAG = os.environ.get("DIMOTIF_DISABLE_NUMBA", "").strip().lower()

try:
    if _FLAG in ("1", "true", "yes", "on"):
        raise ImportError("numba disabled by DIMOTIF_DISABLE_NUMBA")
    from numba import njit as _njit
    from numba import types as _types
    from numba.typed import Dict as _Dict

    USE_NUMBA = True
except ImportError:
    USE_NUMBA = False


if USE_NUMBA:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        if len(args) == 1 and callable(args[0]):
            return _njit(**kwargs)(args[0])
        return _njit(*args, **kwargs)

    def int_dict():
        """Empty int64 -> int64 map usable inside kernels."""
        return _Dict.empty(key_type=_types.int64, value_type=_types.int64)

else:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

    def int_dict():
        return {}


def backend():
    return "numba" if USE_NUMBA else "python"
