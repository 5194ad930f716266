import pytest

import splitaut.verdict as verdict
from splitaut.verdict import (
    CITED_CONSTANTS,
    DEFAULT_SAMPLE,
    FAILED,
    KLEIN_FOUR,
    PARTIAL,
    SMALL_PRIMES,
    TRIVIAL,
    VERIFIED,
    RunOptions,
    automorphism_verdict,
    expected_citations,
    report_json,
    run_report,
)


@pytest.fixture(scope="module")
def verdicts():
    return {p: automorphism_verdict(p) for p in SMALL_PRIMES + DEFAULT_SAMPLE}


@pytest.mark.parametrize("p", SMALL_PRIMES + DEFAULT_SAMPLE)
def test_citations_are_exactly_the_documented_ones(verdicts, p):
    v = verdicts[p]
    assert v.cited_ids() == expected_citations(p)
    assert set(v.cited_ids()) <= set(CITED_CONSTANTS)


@pytest.mark.parametrize("p", SMALL_PRIMES + DEFAULT_SAMPLE)
def test_verdicts(verdicts, p):
    v = verdicts[p]
    assert v.status == VERIFIED
    assert v.aut_group == (KLEIN_FOUR if p == 11 else TRIVIAL)
    assert all(pr.ok for pr in v.premises)
    assert any(pr.source == "computed" for pr in v.premises)


def test_t_discrepancies_are_surfaced(verdicts):
    for p in (29, 31):
        assert any("differs from the reference" in n for n in verdicts[p].notes)
    for p in (17, 19, 23):
        assert not verdicts[p].notes


def test_reduced_run_is_partial():
    v = automorphism_verdict(17, RunOptions(n_max=46))
    assert v.status == PARTIAL and v.aut_group == TRIVIAL


def test_failed_premise_withholds_verdict(monkeypatch):
    monkeypatch.setattr(verdict, "genus_bound_excludes", lambda p: False)
    v = automorphism_verdict(37)
    assert v.status == FAILED and v.aut_group is None


def test_exception_becomes_failed_premise(monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(verdict, "involution_ruled_out", boom)
    v = automorphism_verdict(23)
    assert v.status == FAILED
    assert any("boom" in pr.claim for pr in v.premises)


@pytest.mark.parametrize("p", [2, 7, 15, 9])
def test_bad_primes_rejected(p):
    with pytest.raises(ValueError):
        automorphism_verdict(p)


def test_report_deterministic():
    a = report_json(run_report([13, 37, 11]))
    b = report_json(run_report([11, 13, 37], RunOptions(use_cache=False)))
    assert a == b


def test_empty_report():
    rep = run_report([])
    assert rep["primes"] == [] and rep["t_row"] == {}
