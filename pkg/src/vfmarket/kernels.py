"""Kernel dispatch: compiled Cython kernels when importable, else pure Python.

Set ``VFMARKET_PURE_PYTHON=1`` to force the fallback.  Calls that overflow
64-bit arithmetic in the compiled kernels are transparently re-run on the
pure-Python backend.
"""
import os

from . import _purekernels as pure

FALSE, TRUE, UNKNOWN = pure.FALSE, pure.TRUE, pure.UNKNOWN

compiled = None
if not os.environ.get("VFMARKET_PURE_PYTHON"):
    try:
        from . import _speedups as compiled
    except ImportError:  # extension not built
        compiled = None

BACKEND = "cython" if compiled is not None else "python"


def _dispatch(name):
    slow = getattr(pure, name)
    if compiled is None:
        return slow
    fast = getattr(compiled, name)

    def call(*args):
        try:
            return fast(*args)
        except OverflowError:
            return slow(*args)

    call.__name__ = name
    call.__doc__ = slow.__doc__
    return call


evaluate = _dispatch("evaluate")
cost = _dispatch("cost")
prefix_bounded = _dispatch("prefix_bounded")
prefix_tarski = _dispatch("prefix_tarski")
valuation_sums = _dispatch("valuation_sums")
