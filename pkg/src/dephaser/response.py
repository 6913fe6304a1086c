"""Optical response kernels of the dephasing two-level system.

The two-interval (photon echo) kernel

    R(t1, t2) = exp(-[2 g(t1) + 2 g(t2) - g(t1+t2)])

is written directly in terms of the lineshape function; its modulus must
agree with the flipped-coherence propagation kernel to machine precision,
which ties the response layer to the dynamics layer through two
independently coded expressions.  The one-interval kernel e^{-g(t)}
carries the free decay.  Bath memory makes R non-separable in (t1, t2):
a memoryless kernel would factor as f(t1) h(t2).
"""

from __future__ import annotations

import numpy as np

from .dephasing import _check_time
from .dynamics import SystemParams


def echo_response(evaluator, t1: float, t2: float) -> complex:
    """Two-interval rephasing kernel R(t1, t2)."""
    t1 = _check_time(t1)
    t2 = _check_time(t2)
    expo = 2.0 * evaluator.g(t1) + 2.0 * evaluator.g(t2) - evaluator.g(t1 + t2)
    return complex(np.exp(-expo))


def linear_response(evaluator, system: SystemParams, t: float) -> complex:
    """One-interval kernel e^{-i eps t - g(t)}."""
    t = _check_time(t)
    return complex(np.exp(-1j * system.epsilon * t - evaluator.g(t)))
