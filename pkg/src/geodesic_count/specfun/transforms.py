"""The g-transform pair and the spectral transforms of the test functions.

Everything here is a function of the test function f (through its
values, its derivative, and the combinations f, sqrt(w - 1) f and
f + 2 (w - 1) f') and of the spectral parameter s.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Iterable

from ..errors import PoleError
from .gamma import digamma, is_nonpositive_integer, log_gamma
from .hypergeom import pfq
from .quadrature import integrate_interval
from .testfunctions import LOG2, SQRT2, SmoothingParams, SpectralParam, TestFunction

# ---------------------------------------------------------------------------
# g-transform and its inverse


def g_transform(
    u: float,
    h: Callable[[float], float],
    support_end: float,
    breakpoints: Iterable[float] = (),
) -> float:
    """g(u; h) = int_{max(u,1)}^inf h(t) dt / sqrt((t - u)(t - 1)).

    The inverse-square-root endpoint is removed by t = u + w^2 when u > 1
    and by t = 1 + w^2 otherwise.
    """
    if u >= support_end:
        return 0.0
    base = max(u, 1.0)
    top = math.sqrt(support_end - base)
    knots = [math.sqrt(k - base) for k in breakpoints if base < k < support_end]
    if u > 1.0:
        def integrand(w):
            t = u + w * w
            return 2.0 * h(t) / math.sqrt(t - 1.0)
    else:
        def integrand(w):
            t = 1.0 + w * w
            return 2.0 * h(t) / math.sqrt(t - u)
    return integrate_interval(integrand, 0.0, top, knots)


def g_of(u: float, f: TestFunction, which: str = "a") -> float:
    """g-transform of one of the combinations a, b, c of a test function."""
    return g_transform(u, f.combination(which), f.support_end, f.breakpoints)


def numeric_derivative(g: Callable[[float], float], knots: Iterable[float] = (), step: float = 1e-3):
    """Richardson-extrapolated central difference that never straddles a knot."""
    knots = sorted(knots)

    def dg(u: float) -> float:
        h = step * max(1.0, abs(u))
        for k in knots:
            gap = abs(u - k)
            if gap > 0:
                h = min(h, 0.25 * gap)

        def central(e):
            return (g(u + e) - g(u - e)) / (2.0 * e)

        return (4.0 * central(h) - central(2.0 * h)) / 3.0

    return dg


def g_inverse(
    t: float,
    g: Callable[[float], float] | None,
    support_end: float,
    breakpoints: Iterable[float] = (),
    dg: Callable[[float], float] | None = None,
) -> float:
    """h(t)/sqrt(t - 1) = -(1/pi) int_t^inf g'(u) du / sqrt(u - t), for t > 1.

    With u = t + w^2 this is -(2/pi) int_0^sqrt(T - t) g'(t + w^2) dw.  The
    derivative comes from ``dg`` if given, else from differences of ``g``.
    """
    if t >= support_end:
        return 0.0
    breakpoints = tuple(breakpoints)
    if dg is None:
        if g is None:
            raise ValueError("need g or its derivative")
        dg = numeric_derivative(g, breakpoints + (support_end,))
    top = math.sqrt(support_end - t)
    knots = [math.sqrt(k - t) for k in breakpoints if t < k < support_end]
    return -(2.0 / math.pi) * integrate_interval(lambda w: dg(t + w * w), 0.0, top, knots)


def spline_derivative(us, values, knots: Iterable[float] = ()):
    """Derivative of a piecewise cubic spline through samples of g.

    Samples are split at the knots so the spline never smooths over a kink.
    """
    import numpy as np
    from scipy.interpolate import CubicSpline

    us = np.asarray(us, dtype=float)
    values = np.asarray(values, dtype=float)
    edges = [-math.inf] + sorted(knots) + [math.inf]
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (us >= lo) & (us <= hi)
        if mask.sum() >= 4:
            pieces.append((lo, hi, CubicSpline(us[mask], values[mask]).derivative()))

    def dg(u: float) -> float:
        for lo, hi, d in pieces:
            if lo <= u <= hi:
                return float(d(u))
        return 0.0

    return dg


# ---------------------------------------------------------------------------
# kernels


def kernel_weight1(x: float, sp: SpectralParam) -> complex:
    s = sp.s
    return pfq(((s + 1) / 2, (2 - s) / 2), (1.5,), -x * x)


def kernel_weight1_integrated(x: float, sp: SpectralParam) -> complex:
    s = sp.s
    return pfq((1.0, (s + 1) / 2, (2 - s) / 2), (2.0, 1.5), -x * x)


def kernel_weight0(x: float, sp: SpectralParam) -> complex:
    s = sp.s
    return pfq((s / 2, (1 - s) / 2), (0.5,), -x * x)


def _x_knots(f: TestFunction) -> tuple[float, float]:
    top = math.sqrt(f.support_end - 1.0)
    return top, tuple(math.sqrt(k - 1.0) for k in f.breakpoints if 1.0 < k < f.support_end)


def d1_transform(f: TestFunction, sp: SpectralParam, method: str = "i") -> complex:
    """Weight-one spectral transform of f.

    method "i":  int_0^inf x^2 f(1 + x^2) 2F1((s+1)/2, (2-s)/2; 3/2; -x^2) dx
    method "ii": -int_0^inf (x^2/2) (f + 2(w-1) f')(1 + x^2) 3F2(1, (s+1)/2, (2-s)/2; 2, 3/2; -x^2) dx
    method "v":  the same as "i" written in the angle v = arctan x.
    """
    top, knots = _x_knots(f)
    if method == "i":
        fn = lambda x: x * x * f.value(1.0 + x * x) * kernel_weight1(x, sp)
        return integrate_interval(fn, 0.0, top, knots, complex_valued=True)
    if method == "ii":
        fn = lambda x: -0.5 * x * x * f.comb_c(1.0 + x * x) * kernel_weight1_integrated(x, sp)
        return integrate_interval(fn, 0.0, top, knots, complex_valued=True)
    if method == "v":
        def fn(v):
            c2 = math.cos(v) ** 2
            tan = math.tan(v)
            return tan * tan / c2 * f.value(1.0 / c2) * kernel_weight1(tan, sp)

        return integrate_interval(fn, 0.0, math.atan(top), [math.atan(k) for k in knots], complex_valued=True)
    raise ValueError(f"unknown method {method!r}")


def d0_transform(f: TestFunction, sp: SpectralParam) -> complex:
    """int_0^inf f(1 + x^2) 2F1(s/2, (1-s)/2; 1/2; -x^2) dx."""
    top, knots = _x_knots(f)
    fn = lambda x: f.value(1.0 + x * x) * kernel_weight0(x, sp)
    return integrate_interval(fn, 0.0, top, knots, complex_valued=True)


# ---------------------------------------------------------------------------
# J_s, K_s and their large-argument expansions


def Js(u: float, sp: SpectralParam) -> complex:
    """(2/pi) int_0^sqrt(u) x^2 sqrt(u - x^2) 2F1(...; -x^2) dx in closed form."""
    s = sp.s
    return u * u / 8.0 * pfq(((s + 1) / 2, (2 - s) / 2), (3.0,), -u)


def Js_quadrature(u: float, sp: SpectralParam) -> complex:
    # x = sqrt(u) sin(phi) removes the square-root endpoint
    root = math.sqrt(u)

    def fn(phi):
        x = root * math.sin(phi)
        c = root * math.cos(phi)
        return x * x * c * c * kernel_weight1(x, sp)

    return (2.0 / math.pi) * integrate_interval(fn, 0.0, math.pi / 2, complex_valued=True)


def Ks(u: float, sp: SpectralParam) -> complex:
    """-(1/(2 pi)) int_0^u x sqrt(u^2 - x^2) 3F2(...; -x^2) dx in closed form."""
    s = sp.s
    return -(u ** 3) / (6.0 * math.pi) * pfq((1.0, 1.0, (s + 1) / 2, (2 - s) / 2), (2.5, 2.0, 1.5), -u * u)


def Ks_quadrature(u: float, sp: SpectralParam) -> complex:
    def fn(phi):
        x = u * math.sin(phi)
        c = u * math.cos(phi)
        return x * c * c * kernel_weight1_integrated(x, sp)

    return -(1.0 / (2.0 * math.pi)) * integrate_interval(fn, 0.0, math.pi / 2, complex_valued=True)


def Ks_Rr(params: SmoothingParams, sp: SpectralParam) -> complex:
    """(a/pi) int_0^sqrt2 x^3 sqrt(2 - x^2) 3F2(...; -x^2) dx in closed form."""
    s = sp.s
    return 8.0 * params.a * SQRT2 / (15.0 * math.pi) * pfq((1.0, (s + 1) / 2, (2 - s) / 2), (3.5, 1.5), -2.0)


def Ks_Rr_quadrature(params: SmoothingParams, sp: SpectralParam) -> complex:
    def fn(phi):
        x = SQRT2 * math.sin(phi)
        c = SQRT2 * math.cos(phi)
        return x ** 3 * c * c * kernel_weight1_integrated(x, sp)

    return params.a / math.pi * integrate_interval(fn, 0.0, math.pi / 2, complex_valued=True)


def Ks_Rr_leading(params: SmoothingParams, sp: SpectralParam) -> complex:
    """Large-t leading term (1/(pi lambda)) ((R log R - r log r)/(R - r) - log(2)/2)."""
    R, r = params.R, params.r
    return ((R * math.log(R) - r * math.log(r)) / (R - r) - LOG2 / 2.0) / (math.pi * sp.lam)


def d1_f3_closed(params: SmoothingParams, sp: SpectralParam) -> complex:
    return (Js(params.R ** 2, sp) - Js(params.r ** 2, sp)) / params.H


def d1_f4_closed(params: SmoothingParams, sp: SpectralParam) -> complex:
    R, r = params.R, params.r
    return (Ks(R, sp) - Ks(r, sp)) / (R - r) - Ks(SQRT2, sp) / SQRT2 + Ks_Rr(params, sp)


def _gamma_ratio(num: Iterable[complex], den: Iterable[complex]) -> complex:
    acc = 0j
    for z in num:
        acc += log_gamma(z)
    for z in den:
        acc -= log_gamma(z)
    return cmath.exp(acc)


def gamma_J(s: complex) -> complex:
    if is_nonpositive_integer(0.5 - s):
        raise PoleError(f"gamma_J has a pole at s={s}")
    return _gamma_ratio((0.5 - s,), (1 - s / 2, 2.5 - s / 2)) / 4.0


def gamma_K(s: complex) -> complex:
    if is_nonpositive_integer(0.5 - s):
        raise PoleError(f"gamma_K has a pole at s={s}")
    return _gamma_ratio(((1 - s) / 2, (1 - s) / 2, 0.5 - s), (1 - s / 2, 1 - s / 2, (3 - s) / 2, 2 - s / 2)) / 16.0


def G_J(u: float, s: complex) -> complex:
    return pfq(((s + 1) / 2, (s - 3) / 2), (s + 0.5,), -1.0 / u)


def G_K(u: float, s: complex) -> complex:
    return pfq((s / 2, s / 2 - 1, s / 2 - 0.5), (s / 2 + 0.5, s + 0.5), -1.0 / (u * u))


def C_const(s: complex) -> complex:
    lam = s * (1 - s)
    psi = -digamma(-s / 2) - digamma((s - 1) / 2) + digamma(1.5) + digamma(0.5)
    return psi / (2.0 * math.pi * lam)


def expansion_coeffs(sp: SpectralParam) -> tuple[complex, complex, complex, complex, complex]:
    """(gamma_J(s), gamma_J(1-s), gamma_K(s), gamma_K(1-s), C(s))."""
    s = sp.s
    return gamma_J(s), gamma_J(1 - s), gamma_K(s), gamma_K(1 - s), C_const(s)


def Js_expansion(u: float, sp: SpectralParam) -> complex:
    s = sp.s
    return gamma_J(s) * G_J(u, s) * u ** ((3 - s) / 2) + gamma_J(1 - s) * G_J(u, 1 - s) * u ** (1 + s / 2)


def Ks_expansion(u: float, sp: SpectralParam) -> complex:
    """The large-u form of K_s(u) without its O(1/u) remainder."""
    s = sp.s
    return (
        -gamma_K(s) * G_K(u, s) * u ** (2 - s)
        - gamma_K(1 - s) * G_K(u, 1 - s) * u ** (s + 1)
        - u * math.log(u) / (math.pi * sp.lam)
        + C_const(s) * u
    )


def sieve_coeffs(t: float, D: float) -> tuple[complex, complex]:
    """(a(t, D), b(t, D)), the X^{it} coefficients of d1(f3) and d1(f4)."""
    s = 0.5 + 1j * t
    a = gamma_J(1 - s) * ((D + 1) ** (2 + s) - 1) / ((D + 1) ** 2 - 1)
    b = -gamma_K(1 - s) * ((D + 1) ** (1 + s) - 1) / D
    return a, b


def d1_f3_main(X: float, D: float, t: float) -> complex:
    """X^{1/2} (a(t, D) X^{it} + a(-t, D) X^{-it})."""
    a_plus, _ = sieve_coeffs(t, D)
    a_minus, _ = sieve_coeffs(-t, D)
    return math.sqrt(X) * (a_plus * X ** (1j * t) + a_minus * X ** (-1j * t))


def d1_f4_main(X: float, D: float, t: float) -> complex:
    _, b_plus = sieve_coeffs(t, D)
    _, b_minus = sieve_coeffs(-t, D)
    return math.sqrt(X) * (b_plus * X ** (1j * t) + b_minus * X ** (-1j * t))


# ---------------------------------------------------------------------------
# classical identities used as checks


def hyp2f1_large_r(r: complex, c: complex, b: complex, z: float) -> complex:
    """Leading large-r approximation of 2F1(r, r + c; 2r + b; z) for real z < 1."""
    root = math.sqrt(1.0 - z)
    pref = _gamma_ratio((2 * r + b,), (r + c, r + b - c)) * math.sqrt(math.pi) / cmath.sqrt(r)
    return pref * root ** (b - c - 0.5) / (1.0 + root) ** (2 * r + b - 1)


def quadratic_transform_sides(alpha: complex, beta: complex, z: float) -> tuple[complex, complex]:
    """Both sides of the quadratic transformation, the right one including its factor 4."""
    c = (alpha + beta + 1) / 2
    root = math.sqrt(z)
    lhs = pfq((alpha, beta), (c,), (1 + root) / 2) - pfq((alpha, beta), (c,), (1 - root) / 2)
    rhs = (
        4.0
        * _gamma_ratio((c,), (alpha / 2, beta / 2))
        * math.sqrt(math.pi * z)
        * pfq(((alpha + 1) / 2, (beta + 1) / 2), (1.5,), z)
    )
    return lhs, rhs


def beta_function(t: complex, r: complex) -> complex:
    return _gamma_ratio((t, r), (t + r,))
