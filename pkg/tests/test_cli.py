import json
import subprocess
import sys

import pytest

from tritronquee import cli
from tritronquee.scalars import PrecisionExhausted

STABLE_KEYS = ["D1", "D2", "D3", "D4", "pole", "theorem", "oracle", "meta"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def walk(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from walk(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from walk(v)
    else:
        yield obj


@pytest.fixture(scope="module")
def reports(tmp_path_factory):
    d = tmp_path_factory.mktemp("reports")
    paths = [d / "a.json", d / "b.json"]
    codes = [cli.main(["certify", "--no-oracle", "--format", "json", "--report", str(p)]) for p in paths]
    return codes, [json.loads(p.read_text()) for p in paths], [p.read_text() for p in paths]


def test_certify_exit_zero_and_stable_keys(reports):
    codes, (a, _), _ = reports
    assert codes == [0, 0]
    assert list(a) == STABLE_KEYS
    assert a["meta"]["all_pass"] is True


def test_report_deterministic_modulo_timestamp(reports):
    _, (a, b), (ta, tb) = reports
    a["meta"].pop("timestamp")
    b["meta"].pop("timestamp")
    assert a == b
    strip = lambda t: "\n".join(line for line in t.splitlines() if '"timestamp"' not in line)
    assert strip(ta) == strip(tb)


def test_report_has_no_binary_floats_and_unique_checks(reports):
    _, (a, _), _ = reports
    assert not any(isinstance(v, float) for v in walk(a))
    names = [c["name"] for key in ("D1", "D2", "D3", "D4", "pole", "theorem")
             for node in a[key].values() for c in node["checks"]]
    assert len(names) == len(set(names))
    sample = a["D2"]["d2.handoff"]["checks"][0]
    assert set(sample) >= {"paper_value", "computed", "margin", "status"}
    assert "/" in sample["paper_value"] and set(sample["computed"]) == {"mid", "rad"}


def test_disable_gives_exit_two(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, _, _ = run(capsys, "certify", "--no-oracle", "--disable", "d4.series,d3.QT", "--report", str(p))
    assert code == cli.EXIT_FAIL
    rep = json.loads(p.read_text())
    assert rep["theorem"]["theorem"]["status"] == "unverified-dependency"
    assert rep["D4"]["d4.series"]["note"] == "disabled on request"


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "certify", "--disable", "nope")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "eval", "--x", "banana")[0] == 1
    assert run(capsys, "eval", "--x", "-5")[0] == 1
    assert run(capsys, "--precision-bits", "100000", "pole")[0] == 1


def test_precision_exhaustion_exit_three(capsys, monkeypatch):
    def boom(args):
        raise PrecisionExhausted("radius target not met")
    monkeypatch.setitem(cli.COMMANDS, "pole", boom)
    assert run(capsys, "pole")[0] == cli.EXIT_PRECISION


def test_eval_json_fields(capsys):
    code, out, _ = run(capsys, "--format", "json", "eval", "--x", "11/2")
    assert code == 0
    d = json.loads(out)
    assert {"x", "y0_mid", "y0_rad", "E_bound", "domain"} <= set(d)
    assert d["domain"] == "D1" and d["x"] == "11/2"
    assert float(d["E_bound"]["mid"]) == pytest.approx(5.625e-10, rel=1e-3)


@pytest.mark.parametrize("x, dom, band", [("0", "D2", 1.75e-7), ("-1", "D3", None), ("1/4", "D4", 2.35e-5)])
def test_eval_bands(capsys, x, dom, band):
    extra = ["--domain", "D4"] if dom == "D4" else []
    code, out, _ = run(capsys, "--format", "json", "eval", "--x", x, *extra)
    d = json.loads(out)
    assert code == 0 and d["domain"] == dom
    if band is not None:
        assert float(d["E_bound"]["mid"]) == pytest.approx(band)


def test_residual_and_pole(capsys):
    code, out, _ = run(capsys, "residual", "--domain", "D2")
    assert code == 0 and "calR_sup" in out
    code, out, _ = run(capsys, "--format", "json", "residual", "--domain", "D4")
    assert code == 0 and float(json.loads(out)["sum_abs_Rj_rj"]["mid"]) < 1.311e-6
    code, out, _ = run(capsys, "--format", "json", "pole")
    d = json.loads(out)
    assert code == 0 and d["count"] == 1 and float(d["radius_bound"]["mid"]) < 4.1e-6


def test_module_entry_point_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "tritronquee", "eval", "--x", "1"], capture_output=True, text=True)
    assert ok.returncode == 0 and "D2" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "tritronquee", "residual"], capture_output=True, text=True)
    assert bad.returncode == 1


def test_oracle_check_csv(capsys, tmp_path):
    p = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "oracle-check", "--csv", str(p))
    assert code == 0 and "pass winding_count" in out
    assert p.read_text().startswith("x,y_mid,y_rad,yprime_mid,yprime_rad")
