"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-numpy
fallback is used otherwise. Setting the environment variable
``PARAFW_PURE=1`` forces the fallback. Within a backend all kernels are
deterministic functions of their seeds; across backends integer outputs
match exactly and float outputs agree to rounding of the underlying
transcendental functions.
"""

from __future__ import annotations

import os

from parafw import _kernels_py as pure

if os.environ.get("PARAFW_PURE"):
    impl = pure
    COMPILED = False
else:
    try:
        from parafw import _kernels as impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        impl = pure
        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "pure"


GOLDEN = impl.GOLDEN
KIND_GUMBEL = impl.KIND_GUMBEL
KIND_NORMAL = impl.KIND_NORMAL

mix64 = impl.mix64
derive_seed = impl.derive_seed
uniform_stream = impl.uniform_stream
gumbel_stream = impl.gumbel_stream
normal_stream = impl.normal_stream
simplex_grad_counts = impl.simplex_grad_counts
simplex_support_values = impl.simplex_support_values
power_top = impl.power_top
trace_grad_sum = impl.trace_grad_sum
trace_support_values = impl.trace_support_values
