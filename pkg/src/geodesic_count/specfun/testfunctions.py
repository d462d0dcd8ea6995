"""Compactly supported test functions used to smooth the counting problem.

All functions are functions of w >= 1 and are written through x = sqrt(w - 1).
The smoothing window is [X, X + Y] with Y = D X; R and r are chosen so
that R^2 + 1 = (X + Y)^2 and r^2 + 1 = X^2.

* f1 has g(u; f1) = 1 for u <= X^2, a linear ramp down to 0 at (X + Y)^2.
* f3 = f1 / sqrt(w - 1).
* f4 is the function whose combination f + 2 (w - 1) f' has g-transform
  equal to the four-piece target returned by f4_target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

LOG2 = math.log(2.0)
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SpectralParam:
    """s = 1/2 + i t (or real s in (1/2, 1)) with lambda = s (1 - s)."""

    s: complex

    @classmethod
    def from_t(cls, t: complex) -> SpectralParam:
        return cls(0.5 + 1j * complex(t))

    @property
    def t(self) -> complex:
        return (self.s - 0.5) / 1j

    @property
    def lam(self) -> complex:
        return self.s * (1.0 - self.s)

    def reflected(self) -> SpectralParam:
        return SpectralParam(1.0 - self.s)


@dataclass(frozen=True)
class SmoothingParams:
    X: float
    D: float
    Y: float = field(init=False)
    R: float = field(init=False)
    r: float = field(init=False)
    H: float = field(init=False)
    a: float = field(init=False)
    b: float = field(init=False)
    M: float = field(init=False)
    Bc: float = field(init=False)

    def __post_init__(self):
        X, D = float(self.X), float(self.D)
        if not 0.0 < D < 1.0:
            raise ValueError("D must lie in (0, 1)")
        if X * X - 1.0 <= 2.0:
            raise ValueError("X must exceed sqrt(3) so that r^2 > 2")
        Y = D * X
        R2 = (X + Y) ** 2 - 1.0
        r2 = X * X - 1.0
        R, r = math.sqrt(R2), math.sqrt(r2)
        a = (3.0 * SQRT2 / 8.0) * ((R * math.log(R) - r * math.log(r)) / (R - r) - LOG2 / 2.0)
        values = dict(Y=Y, R=R, r=r, H=R2 - r2, a=a, b=1.0 / SQRT2 - 3.0 * a, M=R / (R - r), Bc=1.0 / (R - r))
        for k, v in values.items():
            object.__setattr__(self, k, v)

    @property
    def support_end(self) -> float:
        return (self.X + self.Y) ** 2


class TestFunction:
    """A piecewise smooth function on [1, support_end] with its derivative.

    Subclasses supply ``value`` and ``derivative``; the three combinations
    used by the trace formulae are derived here.
    """

    __test__ = False  # not a pytest class
    kind = "custom"
    support_end: float = 1.0
    breakpoints: tuple[float, ...] = ()

    def value(self, w: float) -> float:
        raise NotImplementedError

    def derivative(self, w: float) -> float:
        raise NotImplementedError

    def __call__(self, w: float) -> float:
        return self.value(w)

    def comb_a(self, w: float) -> float:
        return self.value(w)

    def comb_b(self, w: float) -> float:
        return math.sqrt(w - 1.0) * self.value(w) if w > 1.0 else 0.0

    def comb_c(self, w: float) -> float:
        """f + 2 (w - 1) f', which equals d/dx [x f(1 + x^2)] at x = sqrt(w - 1)."""
        if w <= 1.0:
            return self.value(1.0)
        return self.value(w) + 2.0 * (w - 1.0) * self.derivative(w)

    def combination(self, which: str) -> Callable[[float], float]:
        return {"a": self.comb_a, "b": self.comb_b, "c": self.comb_c}[which]

    def knots(self) -> tuple[float, ...]:
        return tuple(self.breakpoints) + (self.support_end,)


class ZeroFunction(TestFunction):
    kind = "zero"

    def __init__(self, support_end: float = 2.0):
        self.support_end = support_end

    def value(self, w):
        return 0.0

    def derivative(self, w):
        return 0.0


class BoxFunction(TestFunction):
    """The constant ``level`` on [1, end], zero afterwards."""

    kind = "box"

    def __init__(self, end: float, level: float = 1.0):
        self.support_end = end
        self.level = level

    def value(self, w):
        return self.level if w <= self.support_end else 0.0

    def derivative(self, w):
        return 0.0


class F1(TestFunction):
    kind = "F1"

    def __init__(self, params: SmoothingParams):
        self.params = params
        self.scale = 2.0 / (math.pi * params.H)
        self.support_end = params.support_end
        self.breakpoints = (params.X ** 2,)

    def _roots(self, w):
        p = self.params
        big = math.sqrt(max(p.R ** 2 + 1.0 - w, 0.0))
        small = math.sqrt(r2) if (r2 := p.r ** 2 + 1.0 - w) > 0 else 0.0
        return big, small

    def value(self, w):
        if w <= 1.0 or w >= self.support_end:
            return 0.0
        big, small = self._roots(w)
        return self.scale * math.sqrt(w - 1.0) * (big - small)

    def derivative(self, w):
        if w <= 1.0 or w >= self.support_end:
            return 0.0
        big, small = self._roots(w)
        x = math.sqrt(w - 1.0)
        inner = -0.5 / big
        if small > 0:
            inner += 0.5 / small
        return self.scale * (0.5 * (big - small) / x + x * inner)


class F3(TestFunction):
    kind = "F3"

    def __init__(self, params: SmoothingParams):
        self.params = params
        self.scale = 2.0 / (math.pi * params.H)
        self.support_end = params.support_end
        self.breakpoints = (params.X ** 2,)

    def value(self, w):
        if w >= self.support_end:
            return 0.0
        p = self.params
        big = math.sqrt(p.R ** 2 + 1.0 - w)
        small = math.sqrt(p.r ** 2 + 1.0 - w) if w < p.X ** 2 else 0.0
        return self.scale * (big - small)

    def derivative(self, w):
        if w >= self.support_end:
            return 0.0
        p = self.params
        d = -0.5 / math.sqrt(p.R ** 2 + 1.0 - w)
        if w < p.X ** 2:
            d += 0.5 / math.sqrt(p.r ** 2 + 1.0 - w)
        return self.scale * d


def _half_disc(c: float, x: float) -> float:
    """Antiderivative of sqrt(c^2 - x^2)/x on (0, c], without its c*log(x) part."""
    root = math.sqrt(max(c * c - x * x, 0.0))
    return root - c * math.log(c + root)


def _disc(c: float, x: float) -> float:
    """Full antiderivative of sqrt(c^2 - x^2)/x on (0, c]."""
    return _half_disc(c, x) + c * math.log(x)


class F4(TestFunction):
    """f4(1 + x^2) = Phi(x)/x where Phi is the antiderivative of phi, Phi(0) = 0.

    phi is the four-piece derivative of x f4(1 + x^2).  The constant a
    makes Phi(R) = 0, so f4 vanishes beyond the window.
    """

    kind = "F4"
    _SMALL = 1e-4

    def __init__(self, params: SmoothingParams):
        p = self.params = params
        self.k = 1.0 / (math.pi * (p.R - p.r))
        self.support_end = p.support_end
        self.breakpoints = (3.0, p.X ** 2)
        # phi(x) ~ c1 x near 0 after the 1/x terms cancel
        self.c1 = 1.0 / (2.0 * math.pi * p.R * p.r) - (4.0 * SQRT2 * p.a - 0.5) / (2.0 * math.pi)
        self._g0 = self._inner(0.0)
        self._phi_sqrt2 = self.Phi(SQRT2)
        self._phi_r = self.Phi(p.r)

    def phi(self, x: float) -> float:
        p = self.params
        if x <= 0.0 or x >= p.R:
            return 0.0
        if x < self._SMALL:
            return self.c1 * x
        out = self.k * math.sqrt(p.R * p.R - x * x) / x
        if x <= p.r:
            out -= self.k * math.sqrt(p.r * p.r - x * x) / x
        if x <= SQRT2:
            out -= (SQRT2 + 4.0 * p.a * x * x) * math.sqrt(2.0 - x * x) / (2.0 * math.pi * x)
        return out

    def _inner(self, x: float) -> float:
        # antiderivative on (0, sqrt 2] with log(x) terms dropped (they cancel)
        p = self.params
        s2 = SQRT2
        return (
            self.k * (_half_disc(p.R, x) - _half_disc(p.r, x))
            - _half_disc(s2, x) / (math.pi * s2)
            + (2.0 * p.a / (3.0 * math.pi)) * max(2.0 - x * x, 0.0) ** 1.5
        )

    def Phi(self, x: float) -> float:
        p = self.params
        if x <= 0.0:
            return 0.0
        if x < self._SMALL:
            return 0.5 * self.c1 * x * x
        if x <= SQRT2:
            return self._inner(x) - self._g0
        if x <= p.r:
            return self._phi_sqrt2 + self.k * (
                _disc(p.R, x) - _disc(p.r, x) - _disc(p.R, SQRT2) + _disc(p.r, SQRT2)
            )
        if x < p.R:
            return self._phi_r + self.k * (_disc(p.R, x) - _disc(p.R, p.r))
        return 0.0

    def value(self, w):
        if w <= 1.0 or w >= self.support_end:
            return 0.0
        x = math.sqrt(w - 1.0)
        return self.Phi(x) / x

    def derivative(self, w):
        if w <= 1.0 or w >= self.support_end:
            return 0.0
        x = math.sqrt(w - 1.0)
        return (x * self.phi(x) - self.Phi(x)) / (2.0 * x ** 3)


def f4_target(u: float, params: SmoothingParams) -> float:
    """Four-piece target for g(u; f4 + 2 (w - 1) f4')."""
    p = params
    if u < 1.0:
        raise ValueError("u must be >= 1")
    if u <= 3.0:
        return p.a * u + p.b
    if u <= p.X ** 2:
        return 1.0 / math.sqrt(u - 1.0)
    if u < p.support_end:
        return p.M / math.sqrt(u - 1.0) - p.Bc
    return 0.0


def f4_target_derivative(u: float, params: SmoothingParams) -> float:
    p = params
    if u <= 3.0:
        return p.a
    if u <= p.X ** 2:
        return -0.5 * (u - 1.0) ** -1.5
    if u < p.support_end:
        return -0.5 * p.M * (u - 1.0) ** -1.5
    return 0.0


def abel_piece(c: float, v: float) -> float:
    """(1/(2 pi)) int_v^c du / sqrt((u - v)(u - 1)^3) in closed form."""
    if v >= c:
        return 0.0
    return math.sqrt(c - v) / (math.pi * math.sqrt(c - 1.0) * (v - 1.0))


def recovered_f4_expression(v: float, params: SmoothingParams) -> float:
    """Piecewise closed form of (f4 + 2 (v - 1) f4')/sqrt(v - 1) obtained by inverting the target."""
    p = params
    top, mid = p.support_end, p.X ** 2
    if v >= top:
        return 0.0
    if v > mid:
        return p.M * abel_piece(top, v)
    out = abel_piece(mid, v) + p.M * (abel_piece(top, v) - abel_piece(mid, v))
    if v <= 3.0:
        out -= abel_piece(3.0, v) + 2.0 * p.a * math.sqrt(3.0 - v) / math.pi
    return out
