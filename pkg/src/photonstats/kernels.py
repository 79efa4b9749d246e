"""Backend selection for the sampling kernel.

The compiled extension is used when it imports; otherwise the NumPy
implementation is. Both produce identical output for identical input.
"""

from . import _sampling_py

try:
    from . import _sampling_ext
except ImportError:  # extension not built
    _sampling_ext = None

_BACKENDS = {"python": _sampling_py}
if _sampling_ext is not None:
    _BACKENDS["compiled"] = _sampling_ext

DEFAULT_BACKEND = "compiled" if _sampling_ext is not None else "python"


def available_backends():
    return sorted(_BACKENDS)


def get_kernel(backend=None):
    name = backend or DEFAULT_BACKEND
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; available: {available_backends()}"
        ) from None


def draw_counts(cdf, seed, start, stop, efficiency=1.0, split=False, backend=None):
    return get_kernel(backend).draw_counts(cdf, seed, start, stop, efficiency, split)
