import math

import pytest

from geodesic_count.geometry import (
    cosh_distance,
    dist_formula,
    geodesic_feet,
    geodesic_line_distance_numeric,
    huber_coords,
    mobius_apply,
    orientation_and_side,
    point_distance,
    tan_v_along_axis,
    tan_v_closed,
    tan_v_direct,
    tan_v_theta_derivative,
)
from geodesic_count.group import enumerate_double_cosets, h_power


def sample(count_per_p=50):
    out = []
    for p in (2, 3, 5, 7):
        classes = [c for c in enumerate_double_cosets(p, 3000) if not c.rep.is_identity()]
        step = max(1, len(classes) // count_per_p)
        out.extend(classes[::step][:count_per_p])
    return out


SAMPLE = sample()


def test_sample_size():
    assert len(SAMPLE) == 200


def test_distance_matches_formula():
    worst = max(abs(geodesic_line_distance_numeric(c.rep) - dist_formula(c.rep)) for c in SAMPLE)
    assert worst <= 1e-8


def test_orientation_and_side_are_the_sign_pair():
    for c in SAMPLE:
        assert orientation_and_side(c.rep) == (c.mu, c.mu_prime)


def test_feet_lie_on_one_side():
    for c in SAMPLE:
        top, bottom = geodesic_feet(c.rep)
        assert top * bottom > 0


@pytest.mark.parametrize("theta", [-1.2, -0.3, 0.0, 0.5, 1.1])
def test_tan_v_closed_form(theta):
    for c in SAMPLE:
        for y in (0.05, 0.7, 1.0, 3.0, 40.0):
            v = tan_v_closed(c.rep, theta, y)
            assert abs(v - tan_v_direct(c.rep, theta, y)) <= 1e-10 * max(1.0, abs(v))
            assert tan_v_along_axis(c.rep, theta, y) == v


def test_theta_derivative_is_B():
    # at the foot the image point is well conditioned for the difference quotient
    for c in SAMPLE:
        a, b, cc, d = c.rep.entries()
        foot = math.sqrt(abs(b * d / (a * cc)))
        deriv = tan_v_theta_derivative(c.rep, foot)
        assert abs(deriv - c.b_value) <= 1e-6 * max(1.0, abs(c.b_value))


def test_h_preserves_the_axis_coordinate_v():
    h = h_power(3, 1)
    z = complex(-0.4, 1.3)
    w = mobius_apply(h, z)
    assert huber_coords(w).v == pytest.approx(huber_coords(z).v, abs=1e-14)
    assert huber_coords(w).u - huber_coords(z).u == pytest.approx(4 * math.log1p(math.sqrt(2)), abs=1e-13)


def test_huber_roundtrip_and_distances():
    z = complex(0.7, 2.2)
    assert huber_coords(z).to_point() == pytest.approx(z, abs=1e-14)
    assert point_distance(1j, 1j * math.e) == pytest.approx(1.0, abs=1e-14)
    assert cosh_distance(z, z) == 1.0


def test_identity_meets_axis():
    ident = enumerate_double_cosets(3, 5)[0].rep
    assert dist_formula(ident) == 0.0
    with pytest.raises(ValueError):
        orientation_and_side(ident)
