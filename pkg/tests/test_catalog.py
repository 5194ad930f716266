import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from splitaut.catalog import (
    CatalogError,
    cm_dimension,
    cm_dimension_over_three,
    catalog_from_json,
    catalog_summary,
    catalog_to_json,
    get_catalog,
    import_catalog,
    load_catalog,
    save_catalog,
    splitting_field,
    sturm_bound,
    twisted_charpoly,
)
from splitaut.exact.arith import class_number
from splitaut.exact.poly import Poly

PRIMES = (11, 13, 17, 19, 23, 29, 31)


@pytest.mark.parametrize("p", PRIMES)
def test_twist_is_an_involution(catalog, p):
    cat = catalog(p)
    assert set(cat.twist) == {o.label for o in cat.orbits}
    for a, b in cat.twist.items():
        assert cat.twist[b] == a
        assert cat.by_label(b).level == p * p or cat.by_label(a).level == p * p


@pytest.mark.parametrize("p", PRIMES)
def test_self_twist_without_inner_twist_is_unique_cm_orbit(catalog, p):
    cat = catalog(p)
    fixed = [o for o in cat.orbits if cat.twist[o.label] == o.label and not o.inner_twist]
    if p % 4 == 3:
        assert len(fixed) == 1 and fixed[0].cm
    else:
        assert fixed == []
    # inner twists are fixed points too
    assert all(cat.twist[o.label] == o.label for o in cat.orbits if o.inner_twist)


@pytest.mark.parametrize("p", [11, 19, 23, 31])
def test_cm_orbit_matches_class_number(catalog, p):
    cat = catalog(p)
    cm = [o for o in cat.orbits if o.cm]
    assert len(cm) == 1
    assert cm_dimension(p) == class_number(-p) == cm[0].dimension


@pytest.mark.parametrize("p", [11, 19, 43, 59, 67, 83, 107])
def test_over_three_formula_valid_for_3_mod_8(p):
    assert cm_dimension_over_three(p) == cm_dimension(p) == class_number(-p)


@pytest.mark.parametrize("p", [7, 23, 31, 47])
def test_over_three_formula_invalid_for_7_mod_8(p):
    assert cm_dimension(p) == class_number(-p)
    assert cm_dimension_over_three(p) != class_number(-p)


def test_cm_form_at_121_has_a2_zero(catalog):
    cat = catalog(11)
    (cm,) = [o for o in cat.orbits if o.cm]
    assert cm.level == 121 and cm.charpoly(2) == Poly([0, 1])


def test_level_121_new_orbits(catalog):
    cat = catalog(11)
    new = cat.level_orbits(121)
    assert len(new) == 4 and all(o.dimension == 1 for o in new)
    assert sum(o.epsilon == 1 for o in new) == 1


def test_p13_plus_orbits_have_no_inner_twist(catalog):
    cat = catalog(13)
    assert not any(o.inner_twist for o in cat.plus_orbits())
    assert splitting_field(cat) == "Q"


@pytest.mark.parametrize("p,field", [(11, "hilbert_class_field"), (19, "hilbert_class_field"), (13, "Q")])
def test_splitting_field(catalog, p, field):
    assert splitting_field(catalog(p)) == field


def test_sturm_bound():
    assert sturm_bound(11) == 22
    assert sturm_bound(31) == 166


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6), st.sampled_from([1, -1]))
def test_twisted_charpoly_involution(roots, chi):
    c = Poly.from_roots(roots)
    assert twisted_charpoly(twisted_charpoly(c, chi), chi) == c


# -- persistence ----------------------------------------------------------


@pytest.mark.parametrize("p", [11, 13, 23])
def test_cache_round_trip_identity(catalog, p, tmp_path):
    cat = catalog(p)
    path = tmp_path / f"catalog-{p}.json"
    save_catalog(cat, path)
    back = load_catalog(path)
    assert catalog_to_json(back) == catalog_to_json(cat)
    assert catalog_summary(back) == catalog_summary(cat)


def test_get_catalog_uses_cache(monkeypatch, tmp_path, catalog):
    monkeypatch.setenv("SPLITAUT_CACHE", str(tmp_path))
    first = get_catalog(11)
    assert (tmp_path / "catalog-11.json").exists()
    import splitaut.catalog as mod

    monkeypatch.setattr(mod, "build_catalog", lambda *a, **k: pytest.fail("cache not used"))
    assert catalog_to_json(get_catalog(11)) == catalog_to_json(first)


def test_corrupt_cache_is_rebuilt(monkeypatch, tmp_path):
    monkeypatch.setenv("SPLITAUT_CACHE", str(tmp_path))
    (tmp_path / "catalog-11.json").write_text("{not json")
    with pytest.raises(ValueError):
        load_catalog(tmp_path / "catalog-11.json")
    (tmp_path / "catalog-11.json").write_text(json.dumps({"schema": "other"}))
    assert get_catalog(11).p == 11


def test_import_identity(catalog, tmp_path):
    cat = catalog(11)
    data = catalog_to_json(cat)
    data["provenance"] = "reference-table"
    path = tmp_path / "ext.json"
    path.write_text(json.dumps(data))
    imp = import_catalog(path, "ext.json")
    assert imp.provenance.startswith("imported:")
    a, b = catalog_summary(imp), catalog_summary(cat)
    a.pop("provenance"), b.pop("provenance")
    assert a == b


def test_import_rejects_missing_provenance(catalog, tmp_path):
    data = catalog_to_json(catalog(11))
    del data["provenance"]
    path = tmp_path / "ext.json"
    path.write_text(json.dumps(data))
    with pytest.raises(CatalogError):
        import_catalog(path, "ext.json")


def test_import_rejects_inconsistent_flags(catalog):
    data = catalog_to_json(catalog(11))
    data["orbits"][0]["cm"] = not data["orbits"][0]["cm"]
    with pytest.raises(CatalogError):
        catalog_from_json(data)


def test_import_rejects_wrong_degree(catalog):
    data = catalog_to_json(catalog(13))
    big = next(o for o in data["orbits"] if o["dimension"] > 1)
    big["hecke_charpolys"]["2"] = ["0", "1"]
    with pytest.raises(CatalogError):
        catalog_from_json(data)
