import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodesic_count.errors import DeterminantError, HeightTooSmall
from geodesic_count.group import (
    CSV_COLUMNS,
    canonical_double_coset,
    certified_height,
    enumerate_double_cosets,
    h_power,
    lattice_scan_oracle,
    make_element,
    sign_class,
    write_classes_csv,
)
from geodesic_count.quadfield import qi_sign


def test_determinant_enforced():
    assert make_element(3, 2, 0, 1, 0).B == 7
    with pytest.raises(DeterminantError):
        make_element(3, 2, 0, 0, 0)


def test_p3_below_ten_has_nine_classes():
    classes = enumerate_double_cosets(3, 10)
    assert len(classes) == 9
    assert sorted({c.b_value for c in classes}) == [-5, 1, 7]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
@pytest.mark.parametrize("X", [50, 200])
def test_enumeration_matches_lattice_scan(p, X):
    a = enumerate_double_cosets(p, X)
    b = lattice_scan_oracle(p, X)
    assert [c.rep for c in a] == [c.rep for c in b]
    assert [(c.mu, c.mu_prime, c.fiber_index) for c in a] == [(c.mu, c.mu_prime, c.fiber_index) for c in b]


def test_lattice_height_is_certified():
    with pytest.raises(HeightTooSmall):
        lattice_scan_oracle(3, 200, height=certified_height(200) - 1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_class_invariants(p):
    for c in enumerate_double_cosets(p, 300):
        r = c.rep
        assert r.norm_a - p * r.norm_b == 1
        assert r.B == 2 * r.norm_a - 1 == c.b_value
        if r.is_identity():
            continue
        na, nb, branch = c.ideal_pair
        assert abs(r.norm_a) == na and abs(r.norm_b) == nb
        assert branch == (1 if r.norm_a > 0 else -1)
        assert (c.mu, c.mu_prime) == sign_class(r)
        assert c.mu * c.mu_prime == (1 if r.norm_a > 0 else -1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_fibers_split_into_four_sign_slots(p):
    by_value = {}
    for c in enumerate_double_cosets(p, 400):
        if not c.rep.is_identity():
            by_value.setdefault((c.b_value, c.ideal_pair), []).append(c)
    for group in by_value.values():
        # each ideal pair contributes one class to each slot 0..3
        slots = [c.fiber_index % 4 for c in group]
        assert len(group) % 4 == 0
        assert all(slots.count(k) == len(group) // 4 for k in range(4))
        assert sum(c.mu for c in group) == 0 and sum(c.mu_prime for c in group) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 11), st.integers(-4, 4), st.integers(-4, 4))
def test_canonical_rep_invariant_under_h(idx, k1, k2):
    classes = [c for c in enumerate_double_cosets(7, 120) if not c.rep.is_identity()]
    c = classes[idx % len(classes)]
    g = h_power(7, k1) @ c.rep @ h_power(7, k2)
    assert canonical_double_coset(g) == c


def test_products_and_inverses():
    g = enumerate_double_cosets(5, 100)[3].rep
    assert (g @ g.inverse()).is_identity()
    assert (h_power(5, 2) @ h_power(5, -2)).is_identity()


def test_sign_class_exact():
    for c in enumerate_double_cosets(3, 200)[1:]:
        a, b, cc, d = c.rep.entries()
        assert c.mu == (1 if a * b > 0 else -1)
        assert c.mu_prime == (1 if a * cc > 0 else -1)
        assert qi_sign(c.rep.a) != 0


def test_csv_columns():
    buf = io.StringIO()
    write_classes_csv(buf, enumerate_double_cosets(3, 10))
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 10
