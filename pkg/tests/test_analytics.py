import pytest
from hypothesis import given
from hypothesis import strategies as st

from splitaut.analytics import (
    REFERENCE_N_RANGE,
    WeilDataError,
    exact_degree_counts,
    exclude_odd_order,
    genus_bound_excludes,
    genus_table,
    involution_ruled_out,
    max_fixed_points,
    orbit_weil_factor,
    parity_sequence,
    r_step_inclusion_exclusion,
    residue_degree,
    weil_from_polynomial,
    weil_polynomial,
)
from splitaut.exact.arith import divisors, moebius, primes_up_to
from splitaut.exact.gf2 import GF2n
from splitaut.exact.poly import Poly, power_sums

PRIMES = (11, 13, 17, 19, 23, 29, 31)


def elliptic_weil(a, ell):
    return Poly([ell, -a, 1])


def test_genus_table_rejects_bad_input():
    for bad in (4, 7, 9, 2):
        with pytest.raises(ValueError):
            genus_table(bad)


@pytest.mark.parametrize("p", PRIMES)
def test_weil_functional_equation(catalog, p):
    cat = catalog(p)
    for ell in [l for l in primes_up_to(13) if l != p]:
        w = weil_polynomial(cat, ell)
        assert w.weil_poly.degree == 2 * genus_table(p).g_plus
        assert w.functional_equation_holds()


@pytest.mark.parametrize("p", PRIMES)
def test_weil_bound_on_point_counts(catalog, p):
    w = weil_polynomial(catalog(p), 3 if p != 3 else 5)
    g = w.genus
    for n in range(1, 6):
        q = 3**n
        assert abs(w.N(n) - (q + 1)) <= 2 * g * q**0.5 + 1e-9


@pytest.mark.parametrize("p", PRIMES)
def test_moebius_matches_inclusion_exclusion(catalog, p):
    w = weil_polynomial(catalog(p), 2)
    cert = parity_sequence(w, 40)
    assert cert.inclusion_exclusion_agrees
    for n in range(1, 41):
        assert r_step_inclusion_exclusion(w, n) == cert.R[n] - cert.R[n - 1]


@pytest.mark.parametrize("p", PRIMES)
def test_exact_degree_divisibility(catalog, p):
    w = weil_polynomial(catalog(p), 2)
    for m, a in enumerate(exact_degree_counts(w, 30), 1):
        assert a >= 0 and a % m == 0


@given(st.integers(-3, 3), st.integers(-2, 2))
def test_necklace_divisibility_for_elliptic_factors(a3, a2):
    for ell, a in ((3, a3), (2, a2)):
        s = power_sums(elliptic_weil(a, ell), 24)
        for m in range(1, 25):
            am = sum(moebius(m // d) * (1 + ell**d - s[d - 1]) for d in divisors(m))
            assert am % m == 0 and am >= 0


def test_genus_zero_matches_projective_line():
    # P^1: closed points of degree m number sum mu(m/d) l^d / m, plus infinity at m = 1
    for ell in (2, 3, 5):
        w = weil_from_polynomial(Poly([1]), ell)
        counts = exact_degree_counts(w, 12)
        for m, a in enumerate(counts, 1):
            monic_irreducible = sum(moebius(m // d) * ell**d for d in divisors(m))
            assert a == monic_irreducible + (1 if m == 1 else 0)


def test_level_11_curve_against_brute_force(catalog):
    # X_0(11) mod 2: y^2 + y = x^3 + x^2, counted over F_{2^n}
    (o,) = catalog(11).level_orbits(11)
    w = weil_from_polynomial(orbit_weil_factor(o.charpoly(2), 2), 2)
    for n in range(1, 9):
        F = GF2n(n)
        affine = sum(
            1
            for x in F.elements()
            for y in F.elements()
            if F.mul(y, y) ^ y == F.mul(F.mul(x, x), x) ^ F.mul(x, x)
        )
        assert affine + 1 == w.N(n)


def test_orbit_weil_factor():
    # c = x^2 - 2 (a_l = +-sqrt 2) at l = 3: (x^2 - r x + 3)(x^2 + r x + 3)
    f = orbit_weil_factor(Poly([-2, 0, 1]), 3)
    assert f == Poly([9, 0, 4, 0, 1])


def test_residue_degree():
    assert residue_degree(17) == 1 and residue_degree(23) == 1
    assert residue_degree(19) == 2 and residue_degree(29) == 2
    assert residue_degree(31) == 1


def test_corrupt_weil_data_is_rejected():
    w = weil_from_polynomial(Poly([2, -4, 1]), 2)  # N(1) = -1
    with pytest.raises(WeilDataError):
        exact_degree_counts(w, 10)


def test_max_fixed_points():
    assert max_fixed_points(7) == 12
    assert max_fixed_points(26) == 10
    with pytest.raises(ValueError):
        max_fixed_points(1)


@pytest.mark.parametrize("p", sorted(REFERENCE_N_RANGE))
def test_parity_certificates_rule_out_involutions(catalog, p):
    cert = involution_ruled_out(catalog(p))
    assert cert.ruled_out
    assert cert.sum_P > cert.allowed_max
    assert len(cert.P) == REFERENCE_N_RANGE[p]


def test_parity_needs_range_for_unlisted_prime(catalog):
    with pytest.raises(ValueError):
        involution_ruled_out(catalog(11))


def test_odd_order_exclusion():
    assert exclude_odd_order(5, 7).excluded
    assert not exclude_odd_order(2, 7).excluded
    with pytest.raises(ValueError):
        exclude_odd_order(1, 7)
    with pytest.raises(ValueError):
        exclude_odd_order(0, 7)


def test_genus_bound():
    assert not genus_bound_excludes(31)
    assert all(genus_bound_excludes(p) for p in (37, 41, 43, 101))
