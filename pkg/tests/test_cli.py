import csv
import io
import json
import math

import pytest

from rotwave import acceptance, cli


def run(capsys, *argv):
    status = cli.dispatch(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def result(text):
    return json.loads(text)["result"]


def test_classify(capsys):
    status, out, _ = run(capsys, "classify", "8", "3")
    assert status == 0
    res = result(out)
    assert res["condition"] == "C3" and res["has_accumulation"] is True


def test_zeta_limit(capsys):
    status, out, _ = run(capsys, "zeta", "--x", "1e-3")
    assert status == 0
    assert abs(float(result(out)["zeta"]) - 1 / (8 * math.pi)) < 1e-3


def test_zeta_methods_agree(capsys):
    _, a, _ = run(capsys, "zeta", "--x", "4")
    _, b, _ = run(capsys, "zeta", "--x", "4", "--method", "theta0")
    assert abs(float(result(a)["zeta"]) - float(result(b)["zeta"])) < 1e-8


def test_metadata(capsys):
    _, out, _ = run(capsys, "iota", "--x", "2")
    meta = json.loads(out)["metadata"]
    assert meta["version"] and len(meta["config_hash"]) == 64
    assert float(meta["tolerances"]["integral"]) == 1e-10


def test_numbers_are_17_digit_strings(capsys):
    _, out, _ = run(capsys, "iota", "--x", "2")
    res = result(out)
    assert isinstance(res["iota"], str)
    assert float(res["iota"]) == float(format(float(res["iota"]), ".17g"))


@pytest.mark.parametrize("argv", [["classify", "8", "3", "--bogus"], ["nope"], [],
                                  ["zeta"], ["zeta", "--x", "1", "--eval-tol", "-1"],
                                  ["spectrum", "1", "2", "--K", "0"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.dispatch(argv)
    assert exc.value.code == 64
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["classify", "0", "3"], ["iota", "--x", "-1"],
                                  ["sigma-star", "1", "3"], ["accumulation", "1", "2"],
                                  ["groundstate", "1", "2", "--m", "-100", "--L", "2", "--K", "2"]])
def test_domain_errors(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == 2
    assert "domain error" in err


def test_accuracy_error(capsys, monkeypatch):
    from rotwave import asymptotics
    from rotwave.errors import AccuracyError

    def boom():
        raise AccuracyError("forced")

    monkeypatch.setattr(asymptotics, "find_x0", boom)
    status, _, err = run(capsys, "x0")
    assert status == 3 and "accuracy error" in err


def test_spectrum_csv(capsys):
    status, out, _ = run(capsys, "spectrum", "4", "1", "--L", "5", "--K", "3", "--format", "csv")
    assert status == 0
    lines = out.splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    assert any("config_hash=" in ln for ln in meta)
    assert any(ln == "# condition=C3" for ln in meta)
    rows = list(csv.DictReader(io.StringIO("\n".join(ln for ln in lines if not ln.startswith("#")))))
    assert list(rows[0]) == ["l", "k", "zero", "eigenvalue", "gap_ratio", "in_sigma_star"]
    assert len(rows) == 6 * 3
    ev = [float(r["eigenvalue"]) for r in rows]
    assert ev == sorted(ev)
    assert {(r["l"], r["k"]) for r in rows if r["in_sigma_star"] == "true"} == {("3", "1")}


def test_byte_identical_across_threads(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.dispatch(["spectrum", "8", "3", "--L", "40", "--K", "12", "--format", "csv",
                         "--threads", "1", "-o", str(a)]) == 0
    assert cli.dispatch(["spectrum", "8", "3", "--L", "40", "--K", "12", "--format", "csv",
                         "--threads", "4", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_hash_tracks_config(capsys):
    _, a, _ = run(capsys, "classify", "8", "3")
    _, b, _ = run(capsys, "classify", "8", "3", "--threads", "3")
    _, c, _ = run(capsys, "classify", "8", "3", "--integral-tol", "1e-9")
    h = [json.loads(t)["metadata"]["config_hash"] for t in (a, b, c)]
    assert h[0] == h[1] != h[2]


def test_zeros(capsys):
    _, out, _ = run(capsys, "zeros", "--nu", "0.5", "--k-max", "3")
    rows = result(out)["rows"]
    assert [float(r["value"]) for r in rows] == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi],
                                                              rel=1e-14)


def test_gap_and_sigma_star(capsys):
    _, out, _ = run(capsys, "gap", "4", "1", "--K", "16")
    res = result(out)
    assert res["L"] == 66 and float(res["c_min"]) > 0
    _, out, _ = run(capsys, "sigma-star", "8", "3", "--count", "3")
    rows = result(out)["rows"]
    assert [(r["k"], r["l"]) for r in rows] == [(1, 2), (4, 10), (7, 18)]


def test_accumulation(capsys):
    _, out, _ = run(capsys, "accumulation", "8", "3")
    res = result(out)
    assert float(res["limit_corrected"]) == pytest.approx(0.384892, abs=1e-6)


def test_expansion(capsys):
    _, out, _ = run(capsys, "expansion", "--x", "1", "--k", "100", "200")
    res = result(out)
    assert [r["k"] for r in res["rows"]] == [100, 200]
    assert all(float(r["r0"]) < 0 for r in res["rows"])


def test_groundstate(tmp_path, capsys):
    coef = tmp_path / "c.csv"
    status, out, _ = run(capsys, "groundstate", "1", "2", "--m", "5", "--L", "6", "--K", "6",
                         "--coefficients", str(coef))
    assert status == 0
    res = result(out)
    for key in ("alpha", "m", "p", "c", "beta", "nonradial", "residuals", "truncation"):
        assert key in res
    assert float(res["c"]) > 0
    rows = list(csv.DictReader(coef.open()))
    assert len(rows) == res["truncation"]["modes"]


def test_verify_all_orchestration(capsys, monkeypatch):
    ok = acceptance.CriterionResult(1, "a", True, "fine", 0.0, 1)
    bad = acceptance.CriterionResult(2, "b", False, "off", 0.0, 1)
    monkeypatch.setattr(acceptance, "run", lambda quick, stream: [ok])
    status, out, _ = run(capsys, "verify-all", "--quick")
    assert status == 0 and result(out)["passed"] is True
    monkeypatch.setattr(acceptance, "run", lambda quick, stream: [ok, bad])
    status, out, _ = run(capsys, "verify-all", "--quick")
    assert status == 1 and result(out)["passed"] is False


@pytest.mark.slow
def test_verify_all_quick(capsys):
    status, out, err = run(capsys, "verify-all", "--quick")
    res = result(out)
    failed = sorted(c["number"] for c in res["criteria"] if not c["passed"] and not c["skipped"])
    skipped = sorted(c["number"] for c in res["criteria"] if c["skipped"])
    # 6 and 8 fail against their target values; see README
    assert failed == [6, 8] and skipped == [9, 11]
    assert status == 1
    assert err.count("[PASS]") == 7
