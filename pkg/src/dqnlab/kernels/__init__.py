"""Numeric kernels for the dense-network hot path.

Two interchangeable backends: ``_ckernels`` (compiled Cython) and
``pyref`` (numpy). The compiled backend is preferred when importable;
set ``DQNLAB_KERNELS=python`` or ``=compiled`` to force one. The
selected backend name is exposed as ``BACKEND``.
"""

from __future__ import annotations

import os

from . import pyref

_KERNEL_NAMES = (
    "affine_forward",
    "affine_backward",
    "relu_forward",
    "relu_backward",
    "apply_mask",
    "huber_elementwise",
    "clip_elementwise",
    "adam_update",
    "polyak_update",
)


def _compiled():
    from . import _ckernels

    return _ckernels


def available_backends() -> dict:
    """Importable backends by name, for tests and benchmarks."""
    backends = {"python": pyref}
    try:
        backends["compiled"] = _compiled()
    except ImportError:
        pass
    return backends


_requested = os.environ.get("DQNLAB_KERNELS", "auto").strip().lower() or "auto"
if _requested == "python":
    impl = pyref
    BACKEND = "python"
elif _requested == "compiled":
    impl = _compiled()
    BACKEND = "compiled"
elif _requested == "auto":
    try:
        impl = _compiled()
        BACKEND = "compiled"
    except ImportError:
        impl = pyref
        BACKEND = "python"
else:
    raise RuntimeError(
        f"DQNLAB_KERNELS must be 'auto', 'compiled' or 'python', got {_requested!r}"
    )

globals().update({name: getattr(impl, name) for name in _KERNEL_NAMES})

__all__ = ["BACKEND", "available_backends", "impl", *_KERNEL_NAMES]
