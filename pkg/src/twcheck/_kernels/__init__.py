"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is always available. Setting TWCHECK_PURE=1 forces the fallback.
Both backends share enumeration order and RNG streams, so the choice never
changes a verdict or a report.
"""

import os

from . import _fallback

OP_LOAD = _fallback.OP_LOAD
OP_MUL = _fallback.OP_MUL
OP_OMEGA = _fallback.OP_OMEGA
OP_OMEGA_M1 = _fallback.OP_OMEGA_M1

# reference helpers are pure bookkeeping; always take them from the fallback
decode_position = _fallback.decode_position
sample_digit = _fallback.sample_digit
sample_values = _fallback.sample_values

if os.environ.get("TWCHECK_PURE"):
    _impl = _fallback
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
closure = _impl.closure
mul_table = _impl.mul_table
exhaustive_search = _impl.exhaustive_search
sampled_search = _impl.sampled_search
