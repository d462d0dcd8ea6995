"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import math
import random
import time

import numpy as np
import pytest

from geodesic_count import geometry, group
from geodesic_count.counting import (
    c_p,
    correlation_sum,
    count_report,
    is_prime,
    main_coefficient,
    mean_square_error,
    rms_exponent_fit,
)
from geodesic_count.quadfield import ideal_count_bruteforce, ideal_count_sieve
from geodesic_count.specfun import F3, F4, SmoothingParams, SpectralParam, pfq
from geodesic_count.specfun import transforms as tr
from geodesic_count.trace import geometric_side, smoothed_count_check
from geodesic_count.verify import run_suite
from test_specfun import _beta_weighted


def test_criterion_1_coset_dictionary(small_table, acceptance):
    start = time.perf_counter()
    bad = []
    for p in (2, 3, 5, 7):
        for X in (50, 200, 1000):
            built = [c.rep for c in group.enumerate_double_cosets(p, X)]
            scanned = [c.rep for c in group.lattice_scan_oracle(p, X)]
            rep = count_report(p, X, small_table)
            plus, minus = rep.pair_counts
            ok = (
                built == scanned
                and rep.N1 == 4 * (plus + minus) + 1
                and rep.N4 == 4 * (plus - minus) + 1
                and rep.N2 == rep.N3 == 0
            )
            if not ok:
                bad.append((p, X))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed <= 60
    acceptance(1, ok, f"12 (p, X) cases, mismatches {bad}, {elapsed:.1f} s (limit 60 s)")
    assert ok


def test_criterion_2_main_term(big_table, acceptance):
    X = 10**7
    errs = {}
    for p in (3, 5):
        for branch in (1, -1):
            s = correlation_sum(big_table, p, branch, X)
            errs[(p, branch)] = abs(s / X - main_coefficient(p)) / main_coefficient(p)
    volume = {q: (2 if q == 2 else q - 1 if q % 8 in (3, 5) else q + 1) for q in range(2, 101) if is_prime(q)}
    cp_ok = all(c_p(q) == v for q, v in volume.items())
    ok = max(errs.values()) <= 0.05 and cp_ok
    worst = max(errs.values())
    acceptance(2, ok, f"max relative deviation {worst:.4f} at X=1e7 (limit 0.05); c_p table exact: {cp_ok}")
    assert ok


def test_criterion_3_error_exponent(big_table, acceptance):
    slopes = {}
    for p in (3, 5):
        for branch in (1, -1):
            slopes[(p, branch)] = rms_exponent_fit(big_table, p, branch, 1e4, 1e7).slope
    ok = all(0.40 <= s <= 0.72 for s in slopes.values())
    text = ", ".join(f"p={p}{'+' if b > 0 else '-'}: {s:.3f}" for (p, b), s in slopes.items())
    acceptance(3, ok, f"windowed-RMS exponents {text} (band [0.40, 0.72])")
    assert ok


def test_criterion_4_mean_square(big_table, acceptance):
    xs = [10**4, 3 * 10**4, 10**5, 3 * 10**5, 10**6]
    detail = []
    ok = True
    for branch in (1, -1):
        ratios = [mean_square_error(big_table, 3, branch, X) / (X * math.log(X) ** 2) for X in xs]
        ok &= max(ratios) <= 1.0 and ratios[-1] <= 2 * ratios[0]
        detail.append(f"{'+' if branch > 0 else '-'}: " + " ".join(f"{r:.5f}" for r in ratios))
    acceptance(4, ok, "ratios " + "; ".join(detail) + " (bound 1, last <= 2x first)")
    assert ok


def _geometry_sample():
    out = []
    for p in (2, 3, 5, 7):
        classes = [c for c in group.enumerate_double_cosets(p, 3000) if not c.rep.is_identity()]
        step = max(1, len(classes) // 50)
        out.extend(classes[::step][:50])
    return out


def test_criterion_5_geometry(acceptance):
    sample = _geometry_sample()
    dist = max(abs(geometry.geodesic_line_distance_numeric(c.rep) - geometry.dist_formula(c.rep)) for c in sample)
    orient = all(geometry.orientation_and_side(c.rep) == (c.mu, c.mu_prime) for c in sample)
    tan_err = 0.0
    deriv_err = 0.0
    for c in sample:
        for theta in (-0.8, 0.0, 0.6):
            for y in (0.2, 1.0, 5.0):
                v = geometry.tan_v_closed(c.rep, theta, y)
                tan_err = max(tan_err, abs(v - geometry.tan_v_direct(c.rep, theta, y)) / max(1.0, abs(v)))
        a, b, cc, d = c.rep.entries()
        foot = math.sqrt(abs(b * d / (a * cc)))
        deriv_err = max(deriv_err, abs(geometry.tan_v_theta_derivative(c.rep, foot) - c.b_value) / abs(c.b_value))
    ok = len(sample) == 200 and dist <= 1e-8 and orient and tan_err <= 1e-10 and deriv_err <= 1e-6
    acceptance(
        5,
        ok,
        f"{len(sample)} elements: distance {dist:.1e} (1e-8), orientation ok {orient}, "
        f"tan v {tan_err:.1e} (1e-10), d/dtheta {deriv_err:.1e} (1e-6)",
    )
    assert ok


def test_criterion_6_identity_suite(acceptance):
    start = time.perf_counter()
    results = {r.name: r for r in run_suite("specfun")}
    rng = random.Random(7)
    beta_err = 0.0
    for _ in range(20):
        t = complex(rng.uniform(0.2, 2.9), rng.uniform(-0.5, 0.5))
        r = complex(rng.uniform(0.2, 2.9), rng.uniform(-0.5, 0.5))
        a, b, u = (rng.uniform(0.2, 2), rng.uniform(0.2, 2)), (rng.uniform(0.5, 2.5),), rng.uniform(-5, 0)
        lhs = _beta_weighted(lambda x: pfq(a, b, u * x), r, t)
        rhs = tr.beta_function(t, r) * pfq(a + (r,), b + (t + r,), u)
        beta_err = max(beta_err, abs(lhs - rhs) / abs(rhs))
    quad_err = 0.0
    for alpha in (0.3, 0.8, 1.7):
        for beta in (0.3, 0.8, 1.7):
            for z in (0.05, 0.3, 0.6, 0.89):
                lhs, rhs = tr.quadratic_transform_sides(alpha, beta, z)
                quad_err = max(quad_err, abs(lhs - rhs) / abs(rhs))
    elapsed = time.perf_counter() - start
    failed = [n for n, r in results.items() if not r.passed]
    ok = not failed and beta_err <= 1e-8 and quad_err <= 1e-8 and elapsed <= 120
    acceptance(
        6,
        ok,
        f"{len(results)} named identities, failures {failed}; beta-integral {beta_err:.1e}, "
        f"quadratic transform {quad_err:.1e} (1e-8); {elapsed:.1f} s (limit 120 s)",
    )
    assert ok


def test_criterion_7_envelopes(acceptance):
    ts = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 100]
    r_f3 = r_f4 = 0.0
    for X in (1e2, 1e3, 1e4):
        p = SmoothingParams(X, 0.2)
        for t in ts:
            sp = SpectralParam.from_t(t)
            r_f3 = max(r_f3, abs(tr.d1_f3_closed(p, sp)) * t ** 1.5 / math.sqrt(X))
            r_f4 = max(r_f4, abs(tr.d1_f4_closed(p, sp)) * t ** 2.5 / math.sqrt(X))
    grid = np.linspace(2, 100, 50)
    r_a = max(abs(tr.sieve_coeffs(t, 0.2)[0]) * t ** 2.5 / min(5.0, t) for t in grid)
    r_gj = max(abs(tr.gamma_J(0.5 + 1j * t)) * t ** 2.5 for t in grid)
    r_gk = max(abs(tr.gamma_K(0.5 + 1j * t)) * t ** 3.5 for t in grid)
    us = [10.0, 20.0, 40.0, 80.0, 160.0]
    slopes = []
    for sp in (SpectralParam(0.7 + 0j), SpectralParam.from_t(3.0)):
        gaps = [abs(tr.Ks(u, sp) - tr.Ks_expansion(u, sp)) for u in us]
        slopes.append(float(np.polyfit(np.log(us), np.log(gaps), 1)[0]))
    bound = 5.0
    ok = max(r_f3, r_f4, r_a, r_gj, r_gk) <= bound and all(abs(s + 1) <= 0.2 for s in slopes)
    acceptance(
        7,
        ok,
        f"ratios d1(f3) {r_f3:.3f}, d1(f4) {r_f4:.3f}, a(t,D) {r_a:.3f}, gamma_J {r_gj:.3f}, "
        f"gamma_K {r_gk:.3f} (bound {bound}); remainder slopes {', '.join(f'{s:.3f}' for s in slopes)} (-1 +- 0.2)",
    )
    assert ok


def test_criterion_8_trace(acceptance):
    worst = 0.0
    for p in (2, 3, 5):
        for X in (10.0, 20.0, 40.0):
            prm = SmoothingParams(X, 0.3)
            for kind, f in (("a", F3(prm)), ("b", F3(prm)), ("c", F4(prm))):
                res = geometric_side(kind, f, p)
                worst = max(worst, res.rel_err(), res.max_class_rel_err())
    ratios = [smoothed_count_check(p, 50.0, 0.2).residual_ratio for p in (3, 7)]
    ok = worst <= 1e-6 and max(ratios) <= 10
    acceptance(8, ok, f"closed vs direct {worst:.1e} (1e-6); smoothed residual ratios {ratios[0]:.3f}, {ratios[1]:.4f} (10)")
    assert ok


def test_criterion_9_oracles(small_table, acceptance):
    table = ideal_count_sieve(10_000)
    sieve_ok = all(int(table[n]) == ideal_count_bruteforce(n) for n in range(1, 10_001))
    c = small_table.counts.astype(np.int64)
    pairs = 0
    mult_ok = True
    ns = np.arange(1, 1001)
    for m in range(1, 1001):
        co = ns[np.gcd(ns, m) == 1]
        pairs += co.size
        mult_ok &= bool(np.array_equal(c[m * co], c[m] * c[co]))
    ok = sieve_ok and mult_ok
    acceptance(9, ok, f"sieve = brute force for n <= 1e4: {sieve_ok}; multiplicativity on {pairs} coprime pairs: {mult_ok}")
    assert ok
