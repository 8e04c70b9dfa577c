import json

import pytest

from cmbarrow.cli import dispatch, main


def run(argv):
    return dispatch([str(a) for a in argv])


def test_distort_alpha_zero_equals_spectrum(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    c1, r1, _ = run(["distort", "--temp-k", 2.725, "--alpha", 0, "--csv", a])
    c2, r2, _ = run(["spectrum", "--temp-k", 2.725, "--csv", b])
    assert c1 == c2 == 0
    assert a.read_bytes() == b.read_bytes()
    assert r1["results"]["intensity"] == r2["results"]["intensity"]


def test_synth_deterministic(tmp_path, capsys):
    files = []
    for i in range(2):
        p = tmp_path / f"s{i}.csv"
        code, _, _ = run(["synth", "--temp-k", 2.725, "--alpha", 0.1, "--seed", 42, "--csv", p])
        assert code == 0
        files.append(p.read_bytes())
    assert files[0] == files[1]


def test_synth_fit_pipeline(tmp_path, capsys):
    p = tmp_path / "obs.csv"
    run(["synth", "--temp-k", 2.725, "--alpha", 0.1, "--noise-rel", 0.01, "--seed", 42, "--csv", p])
    code, rep, err = run(["fit", "--input", p])
    assert code == 0 and err == ""
    res = rep["results"]
    assert abs(res["T"] - 2.725) <= 0.01 * 2.725
    assert abs(res["alpha"] - 0.1) <= 0.02
    code, rep_planck, _ = run(["fit", "--input", p, "--model", "planck"])
    assert code == 0 and rep_planck["results"]["alpha"] == 0.0


def test_reports_identical_except_timestamp(tmp_path, capsys):
    r = [run(["coherence", "--freq-ghz", 150, "--dt-ps", 0.1])[1] for _ in range(2)]
    for rep in r:
        rep.pop("timestamp")
    assert r[0] == r[1]


def test_report_to_stdout_is_json(capsys):
    assert main(["coherence", "--freq-ghz", "150", "--dt-ps", "1"]) == 0
    out = capsys.readouterr()
    rep = json.loads(out.out)
    assert rep["results"]["phase"]["satisfied"] is False
    assert out.err == ""


def test_report_to_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["coherence", "--freq-ghz", "150", "--dt-ps", "0.1", "--temp-k", "2.725",
                 "--absorber-density", "0.25", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    rep = json.loads(out.read_text())
    assert rep["results"]["density"]["satisfied"] is True


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["spectrum"],
    ["spectrum", "--temp-k", "2.7", "--bogus", "1"],
    ["spectrum", "--temp-k", "2.7", "--grid", "1:2"],
    [],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["spectrum", "--temp-k", "-1"],
    ["distort", "--temp-k", "2.7", "--alpha", "1.5"],
    ["coherence", "--freq-ghz", "0", "--dt-ps", "1"],
    ["coherence", "--freq-ghz", "150", "--dt-ps", "1", "--temp-k", "2.7"],
    ["arrow-scan", "--eps", "0.01", "--eta", "0.02"],
    ["gauge-check", "--lattice", "4x4", "--trials", "1"],
])
def test_domain_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    out = capsys.readouterr()
    assert out.out == "" and "error" in out.err


def test_bad_file_content_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("freq,intensity\n1,2\n")
    assert main(["fit", "--input", str(p)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path, capsys):
    assert main(["fit", "--input", str(tmp_path / "none.csv")]) == 2


def test_unwritable_out_exit_2(tmp_path, capsys):
    assert main(["coherence", "--freq-ghz", "150", "--dt-ps", "1", "--out", str(tmp_path / "x" / "r.json")]) == 2


def test_gauge_check_small(capsys):
    code, rep, _ = run(["gauge-check", "--seed", 3, "--lattice", "8x8", "--trials", 3])
    assert code == 0
    res = rep["results"]
    assert res["passed"] == {"invariance": True, "necessity": True, "covariance_order": True}
    assert rep["seeds"] == {"kernels": 3}
    assert res["lattice"]["n_t"] == 8


def test_arrow_scan_outputs(tmp_path, capsys):
    p = tmp_path / "scan.csv"
    code, rep, _ = run(["arrow-scan", "--eps", 0.02, "--eta", 0.01, "--rho", 0, "--delta=-1:1:201",
                        "--variant", "retarded", "--csv", p])
    assert code == 0
    lines = p.read_text().splitlines()
    assert lines[0] == "delta,magnitude_retarded,magnitude_advanced,magnitude_signal_linked"
    assert len(lines) == 202
    res = rep["results"]
    assert res["peak_delta"] == 0.0
    assert res["width_over_gap"] == pytest.approx(1.0, abs=0.05)
    assert res["scaling"]["fixed_eps"]["stronger_growth"] == "retarded"
    assert res["scaling"]["proportional"]["slope_retarded"] == pytest.approx(-1.0, abs=0.02)
