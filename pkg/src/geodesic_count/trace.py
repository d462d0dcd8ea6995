"""Geometric sides of the relative trace formulae, computed two ways.

Closed form: a sum over double cosets of weight(gamma) * g(B^2; h) with

    kind a:  weight 1,            h = f,                  plus f(1) len(l)
    kind b:  weight -sign(ac),    h = sqrt(w - 1) f
    kind c:  weight B,            h = f + 2 (w - 1) f',   plus f(1) len(l)

Direct form: for each double coset, sum over the single cosets gamma h^k
of the integral over y in [1, eps^4] of the integrand built from
tan v(gamma h^k e^{i theta} i y) at theta = 0 (or its theta-derivative).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import QuadratureError, TruncationError
from .geometry import tan_v_closed
from .group import DoubleCosetClass, enumerate_double_cosets
from .quadfield import EPS2, LOG_EPS
from .specfun.quadrature import integrate_interval
from .specfun.testfunctions import TestFunction
from .specfun.transforms import g_transform

GEODESIC_LENGTH = 4.0 * LOG_EPS
_E2 = float(EPS2)
_E4 = _E2 * _E2
ORDERS = {"a": "A0", "b": "A1", "c": "A1theta"}
TAIL_TOL = 1e-12


@dataclass
class GeometricSideResult:
    kind: str
    value_closed: float
    value_direct: float | None
    g0_term: float
    class_contributions: list = field(default_factory=list)  # (class, closed, direct)

    @property
    def abs_err(self) -> float:
        return abs(self.value_closed - self.value_direct) if self.value_direct is not None else math.nan

    def rel_err(self) -> float:
        return self.abs_err / (1.0 + abs(self.value_closed))

    def max_class_rel_err(self) -> float:
        worst = 0.0
        for _, closed, direct in self.class_contributions:
            if direct is None:
                continue
            worst = max(worst, abs(closed - direct) / max(abs(closed), 1e-300))
        return worst

    def passed(self, tol: float = 1e-6) -> bool:
        return self.abs_err <= tol * (1.0 + abs(self.value_closed))


def contributing_classes(f: TestFunction, p: int) -> list[DoubleCosetClass]:
    """Non-identity classes with B^2 inside the support of f."""
    bound = math.sqrt(f.support_end)
    return [c for c in enumerate_double_cosets(p, math.floor(bound)) if not c.rep.is_identity() and c.b_value ** 2 < f.support_end]


def _class_weight(kind: str, cls: DoubleCosetClass) -> int:
    if kind == "a":
        return 1
    if kind == "b":
        return -cls.mu_prime
    if kind == "c":
        return cls.b_value
    raise ValueError(f"unknown kind {kind!r}")


def identity_term(kind: str, f: TestFunction) -> float:
    return 0.0 if kind == "b" else f.value(1.0) * GEODESIC_LENGTH


def _integrand(order: str, f: TestFunction, big_b: float):
    if order == "A0":
        return lambda q: f.value(1.0 + q * q)
    if order == "A1":
        # tan v = -q at theta = 0
        return lambda q: -q * f.value(1.0 + q * q)
    if order == "A1theta":
        # d/dtheta [tan v f(1 + tan^2 v)] = B (f + 2 tan^2 v f')
        return lambda q: big_b * (f.value(1.0 + q * q) + 2.0 * q * q * f.derivative(1.0 + q * q))
    raise ValueError(f"unknown order {order!r}")


def _y_roots(ac: float, bd: float, level: float) -> tuple[float, float] | None:
    """y > 0 with |ac| y + |bd| / y = level, i.e. |q(y)| = level."""
    A, C = abs(ac), abs(bd)
    disc = level * level - 4.0 * A * C
    if disc <= 0:
        return None
    root = math.sqrt(disc)
    # stable pair of roots of A y^2 - level y + C = 0
    y_hi = (level + root) / (2.0 * A)
    return C / (A * y_hi), y_hi


def coset_integral(order: str, f: TestFunction, cls: DoubleCosetClass, k: int) -> float:
    """Integral over y in [1, eps^4] for the single coset rep * h^k."""
    a, b, c, d = cls.rep.entries()
    s = _E2 ** k
    m = (a * s, b / s, c * s, d / s)
    ac, bd = m[0] * m[2], m[1] * m[3]
    level = math.sqrt(f.support_end - 1.0)
    span = _y_roots(ac, bd, level)
    if span is None:
        return 0.0
    lo, hi = max(span[0], 1.0), min(span[1], _E4)
    if lo >= hi:
        return 0.0
    knots = []
    for t in f.breakpoints:
        r = _y_roots(ac, bd, math.sqrt(t - 1.0)) if t > 1.0 else None
        if r:
            knots.extend(x for x in r if lo < x < hi)
    # the foot of the perpendicular, where |q| is smallest
    foot = math.sqrt(abs(bd / ac))
    if lo < foot < hi:
        knots.append(foot)
    inner = _integrand(order, f, cls.b_value)

    def fn(y):
        q = -tan_v_closed(m, 0.0, y)
        return inner(q) / y

    return integrate_interval(fn, lo, hi, knots)


def _k_range(f: TestFunction, cls: DoubleCosetClass) -> range:
    a, b, c, d = cls.rep.entries()
    span = _y_roots(a * c, b * d, math.sqrt(f.support_end - 1.0))
    if span is None:
        return range(0)
    step = 4.0 * LOG_EPS
    k_lo = math.floor(math.log(span[0]) / step) - 1
    k_hi = math.floor(math.log(span[1]) / step) + 1
    return range(k_lo, k_hi + 1)


def direct_class_integral(order: str, f: TestFunction, cls: DoubleCosetClass) -> float:
    """Integral over y in (0, inf) for one double coset, summed over its single cosets."""
    ks = _k_range(f, cls)
    if not ks:
        return 0.0
    total = math.fsum(coset_integral(order, f, cls, k) for k in ks)
    for k in (ks.start - 1, ks.stop):
        tail = coset_integral(order, f, cls, k)
        if abs(tail) > TAIL_TOL:
            raise TruncationError(f"coset h^{k} still contributes {tail:.3g}")
    return total


def direct_coset_integral(order: str, f: TestFunction, p: int) -> float:
    """I_{f,0}(0), I_{f,1}(0) or I'_{f,1}(0) from the coset integrals (order A0, A1, A1theta)."""
    kind = {v: k for k, v in ORDERS.items()}[order]
    total = identity_term(kind, f)
    return total + math.fsum(direct_class_integral(order, f, c) for c in contributing_classes(f, p))


def geometric_side(kind: str, f: TestFunction, p: int, direct: bool = True) -> GeometricSideResult:
    """Closed double-coset sum for kind a, b or c, optionally with the direct coset integrals."""
    classes = contributing_classes(f, p)
    comb = f.combination(kind)
    g_cache: dict[int, float] = {}
    closed_terms = []
    by_b: dict[int, int] = {}
    for cls in classes:
        u = cls.b_value ** 2
        if u not in g_cache:
            g_cache[u] = g_transform(float(u), comb, f.support_end, f.breakpoints)
        w = _class_weight(kind, cls)
        closed_terms.append(w * g_cache[u])
        by_b[u] = by_b.get(u, 0) + w
    g0 = identity_term(kind, f)
    # combine integer weights per B^2 first, so exact cancellations stay exact
    closed = g0 + math.fsum(w * g_cache[u] for u, w in sorted(by_b.items()))
    contributions = []
    direct_total = None
    if direct:
        order = ORDERS[kind]
        direct_terms = [direct_class_integral(order, f, cls) for cls in classes]
        direct_total = g0 + math.fsum(direct_terms)
        contributions = list(zip(classes, closed_terms, direct_terms))
    else:
        contributions = [(cls, t, None) for cls, t in zip(classes, closed_terms)]
    return GeometricSideResult(kind, closed, direct_total, g0, contributions)


def non_identity_sign_ad_sum(p: int, X: float) -> int:
    return sum(1 if c.rep.norm_a > 0 else -1 for c in enumerate_double_cosets(p, X) if not c.rep.is_identity())


@dataclass(frozen=True)
class SmoothedCountReport:
    p: int
    X: float
    D: float
    smoothed: float
    count: int
    residual_ratio: float
    threshold: float = 10.0

    @property
    def passed(self) -> bool:
        return self.residual_ratio <= self.threshold

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "X": self.X,
            "D": self.D,
            "smoothed": self.smoothed,
            "count": self.count,
            "residual_ratio": self.residual_ratio,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def smoothed_count_check(p: int, X: float, D: float, threshold: float = 10.0) -> SmoothedCountReport:
    """Compare I'_{f4,1}(0) with the signed count sum sign(ad) over 1 < |B| <= X."""
    from .specfun.testfunctions import F4, SmoothingParams

    params = SmoothingParams(X, D)
    res = geometric_side("c", F4(params), p, direct=False)
    count = non_identity_sign_ad_sum(p, X)
    scale = params.Y + X ** (2.0 / 3.0)
    return SmoothedCountReport(p, X, D, res.value_closed, count, abs(res.value_closed - count) / scale, threshold)


def trace_report(kind: str, p: int, X: float, D: float, f: TestFunction, tol: float = 1e-6) -> dict:
    res = geometric_side(kind, f, p, direct=True)
    return {
        "kind": kind,
        "p": p,
        "X": X,
        "D": D,
        "closed": res.value_closed,
        "direct": res.value_direct,
        "rel_err": res.rel_err(),
        "max_class_rel_err": res.max_class_rel_err(),
        "pass": res.passed(tol),
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
