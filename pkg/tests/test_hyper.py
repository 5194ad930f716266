import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitaut.analytics import weil_polynomial
from splitaut.exact.gf2 import GF2n
from splitaut.exact.qseries import QSeries
from splitaut.hyper import (
    NONWEIERSTRASS,
    OTHER,
    REFERENCE_P11,
    WEIERSTRASS_HYP,
    ModelRefusal,
    ShapeError,
    classify_shape,
    count_points_odd,
    echelonize,
    find_char2_model,
    hyperelliptic_model,
    orbit_qexpansion,
    p11_model,
    plus_space_basis,
    verify_p11,
)

series_rows = st.lists(st.lists(st.integers(-4, 4), min_size=10, max_size=10), min_size=1, max_size=5)


def as_series(rows):
    return [QSeries(r, 10) for r in rows]


def independent(rows):
    try:
        echelonize(as_series(rows))
        return True
    except ShapeError:
        return False


@settings(max_examples=60, deadline=None)
@given(series_rows.filter(independent))
def test_echelon_idempotent(rows):
    basis, pivots = echelonize(as_series(rows))
    again, pivots2 = echelonize(basis)
    assert again == basis and pivots2 == pivots
    assert [b.valuation() for b in basis] == pivots
    assert all(b.lc() == 1 for b in basis)


@settings(max_examples=60, deadline=None)
@given(series_rows.filter(independent), st.randoms(use_true_random=False))
def test_echelon_shuffle_invariant(rows, rnd):
    basis, pivots = echelonize(as_series(rows))
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    # also mix in an invertible change of basis
    mixed = [QSeries(r, 10) for r in shuffled]
    mixed[0] = mixed[0] + sum(mixed[1:], QSeries([], 10)) * 3
    assert echelonize(mixed) == (basis, pivots)


def test_dependent_series_rejected():
    s = QSeries([0, 1, 2], 10)
    with pytest.raises(ShapeError):
        echelonize([s, s * 2])


def test_classify_shape():
    assert classify_shape([1, 2, 3]) == NONWEIERSTRASS
    assert classify_shape([1, 3, 5]) == WEIERSTRASS_HYP
    assert classify_shape([1, 2, 4]) == OTHER


def test_cm_form_121_coefficients(catalog):
    (cm,) = [o for o in catalog(11).orbits if o.cm]
    f = orbit_qexpansion(cm, 11, 20)[0]
    # 121.2.a.d: q + 2q^3 - 2q^4 ... ; a_l = 0 for l inert in Q(sqrt(-11))
    for ell in (2, 7, 13, 17, 19):
        assert f[ell] == 0
    assert f[1] == 1


@pytest.mark.parametrize("p", [17, 19])
def test_shape_other_is_refused(catalog, p):
    basis = plus_space_basis(catalog(p))
    assert basis.shape == OTHER
    assert basis.genus == catalog(p).plus_dimension()
    with pytest.raises(ShapeError):
        hyperelliptic_model(basis)


def test_p13_has_no_hyperelliptic_relation(catalog):
    basis = plus_space_basis(catalog(13))
    assert basis.pivots == [1, 2, 3]
    res = hyperelliptic_model(basis)
    assert isinstance(res, ModelRefusal)
    assert res.residual_valuation is not None


def test_precision_floor(catalog):
    with pytest.raises(ShapeError):
        plus_space_basis(catalog(13), precision=10)


# -- p = 11 ---------------------------------------------------------------


@pytest.fixture(scope="module")
def p11(catalog):
    return catalog(11, 150)


def test_p11_model(p11):
    model, r, f1, h = p11_model(p11)
    assert model.P == REFERENCE_P11
    assert model.certified and model.verified_to > model.certification_bound
    assert [model.x_series[n] for n in range(6)] == [1, -2, 0, 2, 0, -2]
    assert [model.y_series[n] for n in range(5)] == [4, 0, -8, 8, 24]


def test_p11_certificate(p11):
    weil = {ell: weil_polynomial(p11, ell) for ell in (2, 3, 5)}
    cert = verify_p11(p11, weil)
    assert cert["status"] == "VERIFIED", cert["failures"]
    assert len(cert["automorphisms"]) == 4


def test_odd_point_count_brute_force():
    # direct enumeration of the projective closure for y^2 = P(x), deg P = 6
    P = REFERENCE_P11
    for ell in (3, 5, 7):
        c = [int(v) % ell for v in P.coeffs]
        affine = sum(
            1 for x in range(ell) for y in range(ell) if (y * y - sum(ci * x**i for i, ci in enumerate(c))) % ell == 0
        )
        at_inf = 2 if pow(c[6], (ell - 1) // 2, ell) == 1 else 0
        assert count_points_odd(P, ell) == affine + at_inf


def test_char2_model_counts_match_brute_force():
    m = find_char2_model(REFERENCE_P11)
    assert m is not None and m.is_smooth_mod2()
    for n in range(1, 5):
        F = GF2n(n)
        hc = [int(v) & 1 for v in m.h.coeffs]
        fc = [int(v) & 1 for v in m.f.coeffs]
        affine = sum(
            1
            for x in F.elements()
            for y in F.elements()
            if F.mul(y, y) ^ F.mul(F.eval_poly(hc, x), y) == F.eval_poly(fc, x)
        )
        h3 = hc[3] if len(hc) > 3 else 0
        f6 = fc[6] if len(fc) > 6 else 0
        at_inf = sum(1 for z in F.elements() if F.mul(z, z) ^ F.mul(h3, z) == f6)
        assert m.count(n) == affine + at_inf
