"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it was built; otherwise, or
when ``JUSTCHECK_PURE=1`` is set, the pure-Python ``_kernels_py`` is used.
"""

import os
from array import array

from . import _kernels_py

try:
    if os.environ.get("JUSTCHECK_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"


def _ints(xs, code="i"):
    return xs if isinstance(xs, array) and xs.typecode == code else array(code, xs)


def scc_labels(n, src, tgt, state_alive, edge_alive, impl=None):
    impl = impl or _impl
    if impl is _kernels_py:
        return impl.scc_labels(n, src, tgt, state_alive, edge_alive)
    return impl.scc_labels(n, _ints(src), _ints(tgt), _ints(state_alive, "B"), _ints(edge_alive, "B"))


def noninterference_violations(n, src, tgt, label, mask, impl=None):
    impl = impl or _impl
    if impl is _kernels_py or any(x >> 64 for x in mask):
        return _kernels_py.noninterference_violations(n, src, tgt, label, mask)
    return impl.noninterference_violations(n, _ints(src), _ints(tgt), _ints(label), _ints(mask, "Q"))
