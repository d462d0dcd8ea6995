"""Generalized hypergeometric functions pFq on the real negative axis.

Three evaluation routes:

* the defining power series, for |z| <= 1/2 and for p <= q;
* an Euler series transform in w = z/(1 - z) for -1 <= z < -1/2, which
  turns the slowly alternating tail into a series in |w| <= 1/2;
* the connection formula for z < -1, expressing q+1Fq(z) through
  q+1 series in 1/z.

Degenerate connection data (two upper parameters differing by an
integer) is handled by spreading the parameters by distinct multiples
of a small step and extrapolating the symmetric average back to zero.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from ..errors import DivergenceError, ParameterError
from .gamma import is_nonpositive_integer, log_gamma, rgamma

SERIES_TOL = 1e-14
MAX_TERMS = 100_000
PERTURBATION = 1e-6
_INT_TOL = 1e-9


def _as_complex(values) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


def _terminating_degree(a: Sequence[complex]) -> int | None:
    degs = [int(round(-x.real)) for x in a if is_nonpositive_integer(x)]
    return min(degs) if degs else None


def hyp_series(a, b, z: complex, tol: float = SERIES_TOL, max_terms: int = MAX_TERMS) -> complex:
    """Direct summation of the defining series."""
    a, b = _as_complex(a), _as_complex(b)
    z = complex(z)
    stop = _terminating_degree(a)
    total = term = 1.0 + 0j
    quiet = 0
    limit = max_terms if stop is None else stop
    for n in range(limit):
        ratio = z / (n + 1)
        for x in a:
            ratio *= x + n
        for y in b:
            ratio /= y + n
        term *= ratio
        total += term
        if stop is not None:
            continue
        scale = max(abs(total), 1e-300)
        r = abs(ratio)
        if abs(term) <= tol * scale and r < 1.0:
            # geometric tail bound with the current ratio
            if abs(term) * r / (1.0 - r) <= tol * scale:
                quiet += 1
                if quiet >= 2:
                    return total
        else:
            quiet = 0
    if stop is None:
        raise DivergenceError(f"series for z={z} did not converge in {max_terms} terms")
    return total


def _coefficients(a, b, count: int) -> list[complex]:
    coeffs = [1.0 + 0j]
    c = 1.0 + 0j
    for n in range(count - 1):
        for x in a:
            c *= x + n
        for y in b:
            c /= y + n
        c /= n + 1
        coeffs.append(c)
    return coeffs


def hyp_euler(a, b, z: float, tol: float = SERIES_TOL, max_terms: int = 2000) -> complex:
    """Euler-transformed series for real z in [-1, 0).

    With w = z/(1 - z), sum c_n z^n = (1/(1 - z)) sum_k (Delta^k c)_0 w^k
    where (Delta c)_n = c_{n+1} - c_n.  For z in [-1, 0) we have
    |w| <= 1/2, so rounding in the difference table (at most 2^k ulps)
    is offset by the factor w^k.
    """
    a, b = _as_complex(a), _as_complex(b)
    w = z / (1.0 - z)
    coeffs: list[complex] = []
    row: list[complex] = []
    total = 0j
    quiet = 0
    wk = 1.0
    batch = 64
    k = 0
    while k < max_terms:
        if k >= len(coeffs):
            coeffs = _coefficients(a, b, len(coeffs) + batch)
        # row holds the k-th differences; extend the table by one diagonal
        new = [coeffs[k]]
        for j in range(k):
            new.append(new[j] - row[j])
        row = new
        term = row[k] * wk
        total += term
        if abs(term) <= tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 3:
                return total / (1.0 - z)
        else:
            quiet = 0
        wk *= w
        k += 1
    raise DivergenceError(f"Euler-transformed series at z={z} did not converge")


def _degenerate(a: Sequence[complex]) -> bool:
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            d = a[i] - a[j]
            if abs(d.imag) <= _INT_TOL and abs(d.real - round(d.real)) <= _INT_TOL:
                return True
    return False


def _connection(a, b, x: float) -> complex:
    """Connection formula for q+1Fq at real x < -1 with generic upper parameters."""
    total = 0j
    for j, aj in enumerate(a):
        # gamma_j = prod_{k != j} Gamma(a_k - a_j)/Gamma(a_k) * prod_k Gamma(b_k)/Gamma(b_k - a_j)
        weight = 1.0 + 0j
        log_part = 0j
        for k, ak in enumerate(a):
            if k == j:
                continue
            log_part += log_gamma(ak - aj)
            weight *= rgamma(ak)
        for bk in b:
            log_part += log_gamma(bk)
            weight *= rgamma(bk - aj)
        if weight == 0:
            continue
        upper = [aj] + [1.0 - bk + aj for bk in b]
        lower = [1.0 - ak + aj for k, ak in enumerate(a) if k != j]
        inner = pfq(upper, lower, 1.0 / x)
        total += weight * cmath.exp(log_part - aj * math.log(-x)) * inner
    return total


def hyp_large_arg(a, b, x: float, step: float = PERTURBATION) -> complex:
    """q+1Fq(a; b; x) for real x <= -1 via the connection formula.

    If two upper parameters differ by an integer the formula has
    cancelling poles.  The parameters are then moved apart by distinct
    multiples of ``step``; the symmetric average S(step) is even in the
    step, and (4 S(step) - S(2 step))/3 removes the quadratic error.
    """
    a, b = _as_complex(a), _as_complex(b)
    x = float(x)
    if x > -1.0:
        raise ParameterError(f"hyp_large_arg needs x <= -1, got {x}")
    if len(a) != len(b) + 1:
        raise ParameterError("hyp_large_arg needs p = q + 1")
    if not _degenerate(a):
        return _connection(a, b, x)

    def spread(e: float) -> complex:
        return _connection(tuple(ai + i * e for i, ai in enumerate(a)), b, x)

    def sym(e: float) -> complex:
        return 0.5 * (spread(e) + spread(-e))

    return (4.0 * sym(step) - sym(2.0 * step)) / 3.0


def pfq(a, b, z: complex) -> complex:
    """pFq(a; b; z).

    Entire for p <= q.  For p = q + 1 the series is used inside the unit
    disc and real z <= -1 goes through the connection formula.
    """
    a, b = _as_complex(a), _as_complex(b)
    z = complex(z)
    for y in b:
        if is_nonpositive_integer(y):
            raise ParameterError(f"lower parameter {y} is a non-positive integer")
    if z == 0:
        return 1.0 + 0j
    if _terminating_degree(a) is not None:
        return hyp_series(a, b, z)
    p, q = len(a), len(b)
    if p <= q:
        return hyp_series(a, b, z)
    if p > q + 1:
        raise ParameterError(f"{p}F{q} diverges for z != 0")
    if abs(z) <= 0.5:
        return hyp_series(a, b, z)
    if z.imag == 0 and z.real < 0:
        if z.real >= -1.0:
            return hyp_euler(a, b, z.real)
        return hyp_large_arg(a, b, z.real)
    if abs(z) < 1:
        return hyp_series(a, b, z)
    raise ParameterError(f"no continuation implemented for z={z}")


def hyp2f1(a, b, c, z) -> complex:
    return pfq((a, b), (c,), z)
