"""Named invariant checks grouped into suites, for the ``verify`` command.

Each check returns an error figure and passes when it is at most its
tolerance.  Tolerances can be overridden by name, so a tolerance of 0
on any floating-point identity makes that check fail on purpose.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from . import geometry, group
from .counting import count_report
from .quadfield import ideal_count_sieve
from .specfun.gamma import digamma, gamma
from .specfun import transforms as tr
from .specfun.hypergeom import hyp2f1, hyp_series
from .specfun.testfunctions import F3, F4, SmoothingParams, SpectralParam, f4_target


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tol

    def as_dict(self) -> dict:
        return {"name": self.name, "error": self.error, "tol": self.tol, "pass": self.passed}


def _rel(x: complex, y: complex) -> float:
    return abs(x - y) / max(abs(y), 1e-300)


# --- geometry --------------------------------------------------------------


def _sample_elements(count: int = 24):
    out = []
    for p in (2, 3, 5, 7):
        cls = [c for c in group.enumerate_double_cosets(p, 60) if not c.rep.is_identity()]
        out.extend(cls[: count // 4])
    return out


def geometry_distance() -> float:
    return max(abs(geometry.geodesic_line_distance_numeric(c.rep) - geometry.dist_formula(c.rep)) for c in _sample_elements())


def geometry_orientation() -> float:
    return float(sum(geometry.orientation_and_side(c.rep) != (c.mu, c.mu_prime) for c in _sample_elements()))


def geometry_tan_v() -> float:
    worst = 0.0
    for c in _sample_elements():
        for theta in (-0.7, 0.0, 0.4):
            for y in (0.3, 1.0, 2.5):
                v = geometry.tan_v_closed(c.rep, theta, y)
                worst = max(worst, abs(v - geometry.tan_v_direct(c.rep, theta, y)) / max(1.0, abs(v)))
    return worst


def geometry_theta_derivative() -> float:
    worst = 0.0
    for c in _sample_elements():
        a, b, cc, d = c.rep.entries()
        foot = math.sqrt(abs(b * d / (a * cc)))
        worst = max(worst, abs(geometry.tan_v_theta_derivative(c.rep, foot) - c.b_value) / abs(c.b_value))
    return worst


def geometry_length() -> float:
    from .trace import GEODESIC_LENGTH

    return abs(GEODESIC_LENGTH - 2.0 * math.log(3.0 + 2.0 * math.sqrt(2.0)))


# --- special functions -----------------------------------------------------


def specfun_reflection() -> float:
    z = 0.3 + 0.7j
    return _rel(gamma(z) * gamma(1 - z), math.pi / cmath.sin(math.pi * z))


def specfun_digamma_recurrence() -> float:
    z = -2.4 + 1.3j
    return abs(digamma(z + 1) - digamma(z) - 1 / z)


def specfun_euler_transform() -> float:
    # Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a,c-b;c;z/(z-1)); z = -0.8 uses the Euler route
    a, b, c, z = 0.7, 1.3, 2.1, -0.8
    return _rel(hyp2f1(a, b, c, z), (1 - z) ** -a * hyp_series((a, c - b), (c,), z / (z - 1)))


def specfun_connection() -> float:
    a, b, c, z = 0.7, 1.3, 2.1, -3.0
    return _rel(hyp2f1(a, b, c, z), (1 - z) ** -a * hyp_series((a, c - b), (c,), z / (z - 1)))


def specfun_quadratic_transform() -> float:
    lhs, rhs = tr.quadratic_transform_sides(0.6 + 0.4j, 1.1 - 0.4j, 0.36)
    return _rel(lhs, rhs)


def specfun_g_roundtrip() -> float:
    f = F3(SmoothingParams(20.0, 0.3))

    def g(u):
        return tr.g_of(u, f, "a")

    return max(_rel(tr.g_inverse(t, g, f.support_end, f.breakpoints) * math.sqrt(t - 1.0), f.value(t)) for t in (3.0, 10.0, 200.0))


def specfun_f4_target() -> float:
    prm = SmoothingParams(20.0, 0.3)
    f = F4(prm)
    us = (1.0, 2.0, 3.5, 50.0, 399.0, 420.0, 500.0)
    return max(abs(tr.g_of(u, f, "c") - f4_target(u, prm)) for u in us)


def specfun_d1_forms() -> float:
    prm = SmoothingParams(50.0, 0.2)
    sp = SpectralParam.from_t(2.0)
    f3, f4 = F3(prm), F4(prm)
    ref3, ref4 = tr.d1_f3_closed(prm, sp), tr.d1_f4_closed(prm, sp)
    errs = [_rel(tr.d1_transform(f3, sp, m), ref3) for m in ("i", "ii", "v")]
    errs += [_rel(tr.d1_transform(f4, sp, m), ref4) for m in ("i", "ii", "v")]
    return max(errs)


def specfun_js_closed() -> float:
    sp = SpectralParam.from_t(1.5)
    return max(_rel(tr.Js(u, sp), tr.Js_quadrature(u, sp)) for u in (5.0, 40.0))


def specfun_ks_closed() -> float:
    sp = SpectralParam.from_t(1.5)
    return max(_rel(tr.Ks(u, sp), tr.Ks_quadrature(u, sp)) for u in (5.0, 40.0))


# --- group -----------------------------------------------------------------


def group_lattice_agreement() -> float:
    worst = 0
    for p in (2, 3):
        a = {c.rep for c in group.enumerate_double_cosets(p, 200)}
        b = {c.rep for c in group.lattice_scan_oracle(p, 200)}
        worst = max(worst, len(a ^ b))
    return float(worst)


def group_pair_dictionary() -> float:
    table = ideal_count_sieve(2000)
    bad = 0
    for p in (2, 3, 5, 7):
        rep = count_report(p, 200, table)
        plus, minus = rep.pair_counts
        bad += (rep.N1 != 4 * (plus + minus) + 1) + (rep.N4 != 4 * (plus - minus) + 1) + (rep.N2 != 0) + (rep.N3 != 0)
    return float(bad)


def group_small_table() -> float:
    return float(abs(len(group.enumerate_double_cosets(3, 10)) - 9))


# --- trace -----------------------------------------------------------------


def _trace(kind: str, which: str) -> float:
    from .trace import geometric_side

    prm = SmoothingParams(20.0, 0.3)
    f = F3(prm) if which == "f3" else F4(prm)
    res = geometric_side(kind, f, 3)
    # kind b totals cancel to zero, so also compare class by class
    return max(res.rel_err(), res.max_class_rel_err())


def trace_kind_b_cancellation() -> float:
    from .trace import geometric_side

    return abs(geometric_side("b", F3(SmoothingParams(20.0, 0.3)), 3, direct=False).value_closed)


def trace_smoothed_count() -> float:
    from .trace import smoothed_count_check

    return max(smoothed_count_check(p, 50.0, 0.2).residual_ratio for p in (3, 7))


Check = tuple[str, Callable[[], float], float]

SUITES: dict[str, list[Check]] = {
    "geometry": [
        ("geometry.distance", geometry_distance, 1e-8),
        ("geometry.orientation", geometry_orientation, 0.0),
        ("geometry.tan_v", geometry_tan_v, 1e-10),
        ("geometry.theta_derivative", geometry_theta_derivative, 1e-6),
        ("geometry.length", geometry_length, 1e-14),
    ],
    "specfun": [
        ("specfun.reflection", specfun_reflection, 1e-12),
        ("specfun.digamma_recurrence", specfun_digamma_recurrence, 1e-12),
        ("specfun.euler_transform", specfun_euler_transform, 1e-10),
        ("specfun.connection", specfun_connection, 1e-8),
        ("specfun.quadratic_transform", specfun_quadratic_transform, 1e-8),
        ("specfun.g_roundtrip", specfun_g_roundtrip, 1e-8),
        ("specfun.f4_target", specfun_f4_target, 1e-8),
        ("specfun.d1_forms", specfun_d1_forms, 1e-8),
        ("specfun.js_closed", specfun_js_closed, 1e-8),
        ("specfun.ks_closed", specfun_ks_closed, 1e-8),
    ],
    "group": [
        ("group.lattice_agreement", group_lattice_agreement, 0.0),
        ("group.pair_dictionary", group_pair_dictionary, 0.0),
        ("group.small_table", group_small_table, 0.0),
    ],
    "trace": [
        ("trace.kind_a_f3", lambda: _trace("a", "f3"), 1e-6),
        ("trace.kind_b_f3", lambda: _trace("b", "f3"), 1e-6),
        ("trace.kind_c_f4", lambda: _trace("c", "f4"), 1e-6),
        ("trace.kind_b_cancellation", trace_kind_b_cancellation, 0.0),
        ("trace.smoothed_count", trace_smoothed_count, 10.0),
    ],
}


def check_names() -> list[str]:
    return [name for checks in SUITES.values() for name, _, _ in checks]


def run_suite(suite: str, overrides: dict[str, float] | None = None) -> list[CheckResult]:
    if suite not in SUITES:
        raise KeyError(suite)
    overrides = overrides or {}
    results = []
    for name, fn, tol in SUITES[suite]:
        results.append(CheckResult(name, float(fn()), overrides.get(name, tol)))
    return results
