"""Adaptive quadrature for real and complex integrands.

A thin layer over scipy's QUADPACK binding: complex integrands are split
into real and imaginary parts, interior breakpoints are honoured, and
QUADPACK's warnings become QuadratureError unless the reported error
estimate is still inside the requested tolerance.
"""

from __future__ import annotations

import warnings
from typing import Callable, Iterable

from scipy import integrate

from ..errors import QuadratureError

ABS_TOL = 1e-10
REL_TOL = 1e-11
PANEL_CAP = 10_000


def _quad_real(fn, lo, hi, points, epsabs, epsrel, limit, **extra):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, lo, hi, points=points, epsabs=epsabs, epsrel=epsrel, limit=limit, **extra)
            return val, err
        except integrate.IntegrationWarning as exc:
            message = str(exc)
    # rerun quietly to see how far off the estimate is
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(fn, lo, hi, points=points, epsabs=epsabs, epsrel=epsrel, limit=limit, **extra)
    if err <= 10.0 * max(epsabs, epsrel * abs(val)):
        return val, err
    raise QuadratureError(f"quadrature on [{lo}, {hi}] failed: {message.strip()} (estimate {err:.3g})")


def integrate_interval(
    fn: Callable[[float], complex],
    lo: float,
    hi: float,
    breakpoints: Iterable[float] = (),
    *,
    complex_valued: bool = False,
    epsabs: float = ABS_TOL,
    epsrel: float = REL_TOL,
    limit: int = PANEL_CAP,
    **extra,
) -> complex | float:
    """Integral of fn over [lo, hi]; interior breakpoints split the panels."""
    if hi == lo:
        return 0j if complex_valued else 0.0
    pts = sorted({float(p) for p in breakpoints if lo < p < hi}) or None
    if extra:
        # weighted rules do not take breakpoints
        pts = None
    if not complex_valued:
        return _quad_real(fn, lo, hi, pts, epsabs, epsrel, limit, **extra)[0]
    # the real and imaginary passes mostly sample the same nodes
    memo: dict[float, complex] = {}

    def cached(x: float) -> complex:
        v = memo.get(x)
        if v is None:
            v = memo[x] = complex(fn(x))
        return v

    re, _ = _quad_real(lambda x: cached(x).real, lo, hi, pts, epsabs, epsrel, limit, **extra)
    im, _ = _quad_real(lambda x: cached(x).imag, lo, hi, pts, epsabs, epsrel, limit, **extra)
    return complex(re, im)


def integrate_pieces(fn, edges: Iterable[float], *, complex_valued: bool = False, **kw):
    """Sum of integrals over consecutive panels [e_k, e_{k+1}]."""
    edges = sorted(set(float(e) for e in edges))
    total = 0j if complex_valued else 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate_interval(fn, lo, hi, complex_valued=complex_valued, **kw)
    return total
