"""Time-limited balanced truncation for linear time-invariant systems.

Systems are passed as dense NumPy arrays ``A, B, C`` with optional ``D`` and
mass matrix ``M``. Modes are ``"bt"``, ``"tlbt"`` and ``"mtlbt"``.
"""

from ._tlbt import (
    TlbtError,
    gramian,
    gramian_dense,
    half_decay_time,
    hankel_sv,
    impulse_response,
    reduce,
    relative_error,
    step_response,
    synthetic,
)

__all__ = [
    "TlbtError",
    "gramian",
    "gramian_dense",
    "half_decay_time",
    "hankel_sv",
    "impulse_response",
    "reduce",
    "relative_error",
    "step_response",
    "synthetic",
]
