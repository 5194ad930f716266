import json

import pytest

from splitaut.catalog import catalog_to_json
from splitaut.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_genus(capsys):
    code, out, _ = run(capsys, "genus", "-p", "31")
    assert code == 0 and "g+ = 30" in out


def test_global_options_after_command(capsys):
    code, out, _ = run(capsys, "genus", "-p", "29", "--format", "json")
    assert code == 0 and json.loads(out) == {"p": 29, "g_plus": 26, "g_zero": 2}


@pytest.mark.parametrize("bad", ["4", "7", "x", "1"])
def test_bad_prime_exits_2(capsys, bad):
    with pytest.raises(SystemExit) as exc:
        main(["genus", "-p", bad])
    assert exc.value.code == 2


def test_catalog_and_import(capsys, tmp_path, catalog):
    path = tmp_path / "c11.json"
    code, out, _ = run(capsys, "catalog", "-p", "11", "-o", str(path))
    assert code == 0 and "121.d" in out
    data = json.loads(path.read_text())
    data["provenance"] = "table"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "--format", "json", "pointcount", "-p", "11", "--import", str(path), "--nmax", "3")
    assert code == 0 and json.loads(out)["N"][0] == "5"
    code, _, err = run(capsys, "catalog", "-p", "13", "--import", str(path))
    assert code == 1 and "p = 11" in err


def test_malformed_import_exits_1(capsys, tmp_path, catalog):
    data = catalog_to_json(catalog(11))
    data["orbits"][0]["epsilon"] = 3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "catalog", "-p", "11", "--import", str(path))
    assert code == 1 and "epsilon" in err


def test_parity(capsys):
    code, out, _ = run(capsys, "parity", "-p", "23")
    assert code == 0 and "sum P_2(n) for n <= 38 = 13" in out


def test_hyper(capsys):
    code, out, _ = run(capsys, "hyper", "-p", "11")
    assert code == 0 and "y^2 = x^6 - 7*x^4 + 11*x^2 + 11" in out
    code, out, _ = run(capsys, "hyper", "-p", "17")
    assert code == 0 and "shape OTHER" in out


def test_verdict_needs_target(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verdict"])
    assert exc.value.code == 2


def test_verdict_single(capsys):
    code, out, _ = run(capsys, "verdict", "-p", "41")
    assert code == 0 and "trivial [VERIFIED]" in out


def test_report_to_file(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "--format", "json", "report", "--primes", "11,37", "-o", str(out_path))
    assert code == 0
    rep = json.loads(out_path.read_text())
    assert [s["p"] for s in rep["primes"]] == [11, 37]


def test_report_unwritable(capsys, tmp_path):
    code, _, err = run(capsys, "report", "--primes", "37", "-o", str(tmp_path / "missing" / "r.txt"))
    assert code == 1 and "cannot write" in err


def test_no_cache_flag(capsys, tmp_path):
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path), "--no-cache", "catalog", "-p", "11")
    assert code == 0
    assert not list(tmp_path.iterdir())
