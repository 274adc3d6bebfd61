"""Atomic float64 accumulation for jitted parallel kernels.

numba exposes no atomic add on CPU arrays, so this builds one directly on
the LLVM ``atomicrmw fadd`` instruction.  Monotonic ordering suffices: the
kernels only need the read-modify-write to be indivisible, there is no
cross-location ordering to protect.
"""

from __future__ import annotations

from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic

__all__ = ["atomic_add"]


@intrinsic
def _atomic_add_intrin(typingctx, arr_t, idx_t, val_t):
    """``atomicrmw fadd`` on one element of a 1-d float64 array."""
    if not (isinstance(arr_t, types.Array) and arr_t.dtype == types.float64 and arr_t.ndim == 1):
        return None
    if not isinstance(idx_t, types.Integer):
        return None
    sig = types.float64(arr_t, types.intp, types.float64)

    def codegen(context, builder, signature, args):
        arr, idx, val = args
        ary = context.make_array(signature.args[0])(context, builder, arr)
        ptr = cgutils.get_item_pointer(
            context, builder, signature.args[0], ary, [idx], wraparound=False
        )
        return builder.atomic_rmw("fadd", ptr, val, ordering="monotonic")

    return sig, codegen


@njit(cache=True)
def atomic_add(arr, idx, val):
    """Atomically ``arr[idx] += val``; returns the value seen before the add.

    Callable only from jitted code.  ``arr`` must be a 1-d float64 array
    and ``idx`` in bounds; no bounds check is performed.
    """
    return _atomic_add_intrin(arr, idx, val)
