"""Complex log-gamma and digamma.

log_gamma uses the Lanczos approximation (g = 7, nine coefficients) in
the half-plane Re z >= 1/2 and the upward recurrence elsewhere.  The
recurrence keeps the principal branch, which reflection would not.
"""

from __future__ import annotations

import cmath
import math

from ..errors import PoleError

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2k / (2k) for the asymptotic digamma series
_DIGAMMA_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def is_nonpositive_integer(z: complex, tol: float = 0.0) -> bool:
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def _lanczos_log_gamma(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z)."""
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log_gamma has a pole at {z}")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    n = int(math.ceil(0.5 - z.real))
    acc = 0j
    for k in range(n):
        acc += cmath.log(z + k)
    return _lanczos_log_gamma(z + n) - acc


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def rgamma(z: complex) -> complex:
    """1/Gamma(z), which is zero at the poles of Gamma."""
    if is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_gamma(z))


def _cot_pi(z: complex) -> complex:
    # exponential form stays finite for large |Im z|
    if z.imag >= 0:
        q = cmath.exp(2j * math.pi * z)
        return 1j * (q + 1) / (q - 1)
    q = cmath.exp(-2j * math.pi * z)
    return 1j * (1 + q) / (1 - q)


def digamma(z: complex) -> complex:
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"digamma has a pole at {z}")
    if z.real < 0.5:
        return digamma(1.0 - z) - math.pi * _cot_pi(z)
    acc = 0j
    while abs(z) < 10.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    tail = 0j
    power = inv2
    for c in _DIGAMMA_TAIL:
        tail += c * power
        power *= inv2
    return acc + cmath.log(z) - 0.5 / z - tail
