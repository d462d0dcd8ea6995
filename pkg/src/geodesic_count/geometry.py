"""Upper half-plane geometry adapted to the imaginary axis.

Points are complex numbers with positive imaginary part.  Group elements
act through their real embedding.  Huber coordinates (u, v) = (log|z|,
-arctan(x/y)) are polar coordinates centred on the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError
from .group import GroupElement

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HuberCoords:
    u: float
    v: float

    def to_point(self) -> complex:
        r = math.exp(self.u)
        return complex(-r * math.sin(self.v), r * math.cos(self.v))


def _matrix(g) -> tuple[float, float, float, float]:
    if isinstance(g, GroupElement):
        return g.entries()
    a, b, c, d = g
    return float(a), float(b), float(c), float(d)


def mobius_apply(g, z: complex) -> complex:
    """(az + b)/(cz + d); g is a GroupElement or a real tuple (a, b, c, d)."""
    a, b, c, d = _matrix(g)
    return (a * z + b) / (c * z + d)


def huber_coords(z: complex) -> HuberCoords:
    return HuberCoords(math.log(abs(z)), -math.atan(z.real / z.imag))


def point_distance(z: complex, w: complex) -> float:
    return math.acosh(cosh_distance(z, w))


def cosh_distance(z: complex, w: complex) -> float:
    return 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)


def golden_min(fn, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200):
    """Golden-section search for the minimum of a unimodal function on [lo, hi]."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = fn(x2)
    else:
        if hi - lo > tol:
            raise ConvergenceError(f"golden-section search did not reach {tol} in {max_iter} steps")
    return (x1, f1) if f1 <= f2 else (x2, f2)


def geodesic_line_distance_numeric(g, span: float = 40.0, tol: float = 1e-10) -> float:
    """Distance between the imaginary axis and its image under g, by brute minimization.

    Both geodesics are parametrized by arc length log(y); the outer search
    runs along the image, the inner one along the axis.  The inner bracket
    is centred where a point's distance to the axis is smallest in the
    y-direction, which only speeds up the search.
    """
    m = _matrix(g)

    def inner(log_y2: float) -> float:
        w = mobius_apply(m, 1j * math.exp(log_y2))
        centre = math.log(abs(w))
        _, val = golden_min(lambda ly: cosh_distance(1j * math.exp(ly), w), centre - span, centre + span, tol)
        return val

    a, b, c, d = m
    # the image geodesic is closest to the axis near y2 = sqrt|bd/(ac)|
    centre = 0.5 * math.log(abs(b * d / (a * c))) if a * b * c * d != 0 else 0.0
    _, best = golden_min(inner, centre - span, centre + span, tol)
    return math.acosh(best)


def dist_formula(g: GroupElement) -> float:
    return math.acosh(max(abs(g.B), 1))


def geodesic_feet(g) -> tuple[float, float]:
    """Endpoints g(infinity) = a/c and g(0) = b/d of the image of the axis."""
    a, b, c, d = _matrix(g)
    return a / c, b / d


def orientation_and_side(g: GroupElement) -> tuple[int, int]:
    """(clockwise, side) of the image geodesic relative to the axis."""
    if abs(g.B) <= 1:
        raise ValueError("the image geodesic meets the axis")
    top, bottom = geodesic_feet(g)
    side = 1 if top > 0 else -1
    if (bottom > 0) != (top > 0):
        raise AssertionError("feet on opposite sides of the axis")
    clockwise = 1 if top > bottom else -1
    return clockwise, side


def tan_v_closed(g, theta: float, y: float) -> float:
    """tan v(g e^{i theta} i y) = B tan(theta) - (a c y + b d / y)/cos(theta)."""
    a, b, c, d = _matrix(g)
    big_b = a * d + b * c
    return big_b * math.tan(theta) - (a * c * y + b * d / y) / math.cos(theta)


def tan_v_direct(g, theta: float, y: float) -> float:
    """tan v of the image point, from the Mobius action itself.

    v = -arctan(x/y), so tan v = -x/y.  Both coordinates come from
    (az + b) conj(cz + d) / |cz + d|^2, whose imaginary part is Im z
    because the determinant is 1; plain complex division would lose that
    part to cancellation when the entries are large.
    """
    a, b, c, d = _matrix(g)
    z = complex(-y * math.sin(theta), y * math.cos(theta))
    num = (a * z + b) * (c * z + d).conjugate()
    return -num.real / z.imag


def tan_v_along_axis(g, theta: float, y: float) -> float:
    return tan_v_closed(g, theta, y)


def tan_v_theta_derivative(g, y: float, step: float = 1e-3) -> float:
    """Richardson-extrapolated central difference in theta at 0, direct evaluation."""

    def central(h):
        return (tan_v_direct(g, h, y) - tan_v_direct(g, -h, y)) / (2.0 * h)

    return (4.0 * central(step) - central(2.0 * step)) / 3.0
