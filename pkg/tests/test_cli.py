import json
import subprocess
import sys

import pytest

from painleve_d42.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_apply_word_s1(capsys):
    code, out, _ = run(capsys, "apply-word", "--word", "s1", "--point", "1,1,0,2,0,0,1", "--alpha", "0,1,0,0")
    assert code == 0
    data = json.loads(out)
    assert data["point"]["z"] == "1/2"
    assert data["alpha"] == ["1", "-1", "1", "0"]


def test_apply_word_involution(capsys):
    code, out, _ = run(capsys, "apply-word", "--word", "s2 s2", "--point", "1/3,1,2/7,2,5,1/9,3/2", "--alpha", "1/2,1/3,1/7,1/42")
    assert code == 0
    data = json.loads(out)
    assert [data["point"][k] for k in "xyzwqp"] == ["1/3", "1", "2/7", "2", "5", "1/9"]


def test_apply_word_translation(capsys):
    code, out, _ = run(capsys, "apply-word", "--word", "s1 s2 s3 s2 s1 s0", "--point", "1/3,1,2/7,2,5,1/9,3/2",
                       "--alpha", "1/2,1/3,1/7,1/42")
    assert json.loads(out)["alpha"] == ["-3/2", "7/3", "1/7", "1/42"]


def test_apply_word_pole(capsys):
    code, out, err = run(capsys, "apply-word", "--word", "s1", "--point", "1,1,0,0,0,0,1", "--alpha", "0,1,0,0")
    assert code == 1 and "w" in json.loads(out)["denominator"]


def test_alpha_validation(capsys):
    code, _, err = run(capsys, "integrate", "--alpha", "0.1,0.2,0.3,0.5", "--init", "0,0,0,0,0,0", "--t0", "1", "--t1", "2")
    assert code == 2 and "alpha0 + alpha1 + alpha2 + alpha3" in err
    code, _, _ = run(capsys, "apply-word", "--word", "s1", "--point", "1,1,0,2,0,0,1", "--alpha", "1/2,1/2,1/2,0")
    assert code == 2


def test_decimal_alpha_within_tolerance(capsys):
    code, out, _ = run(capsys, "integrate", "--alpha", "0.1,0.2,0.3,0.4000000000001", "--init", "0,0,0,0,0,0",
                       "--t0", "1", "--t1", "1.1")
    assert code == 0


def test_integrate_writes_csv(capsys, tmp_path):
    path = tmp_path / "o.csv"
    code, out, _ = run(capsys, "integrate", "--alpha", "1,0,0,0", "--init", "0.1,0.1,0.1,0.1,0.1,0.1",
                       "--t0", "1", "--t1", "2", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x,y,z,w,q,p"
    ts = [float(line.split(",")[0]) for line in lines[1:]]
    assert all(b > a for a, b in zip(ts, ts[1:]))
    summary = json.loads(out)
    assert summary["steps"] > 0 and "blowup" in summary


def test_integrate_w_zero(capsys):
    code, out, _ = run(capsys, "integrate", "--alpha", "1/3,0,1/5,7/15", "--init", "0.1,-0.2,0.3,0,0.1,0.05",
                       "--t0", "1", "--t1", "2")
    data = json.loads(out)
    assert code == 0 and not data["blowup"]
    assert abs(data["final_state"]["w"]) <= 1e-9


def test_integrate_bad_span(capsys):
    code, _, err = run(capsys, "integrate", "--alpha", "1,0,0,0", "--init", "0,0,0,0,0,0", "--t0", "-1", "--t1", "1")
    assert code == 2


def test_integrate_blowup_exit_zero(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "integrate", "--alpha", "0.1,0.2,0.3,0.4", "--init", "0.1,0.2,0.3,0,0.2,0.1",
                       "--t0", "1", "--t1", "2", "--out", str(path))
    data = json.loads(out)
    assert code == 0 and data["blowup"] and data["final_t"] < 2


def test_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2


def test_verify_divisors(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "divisors")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 4
    assert all(r["status"] == "pass" for r in reports)
    assert set(reports[0]) == {"check_id", "status", "detail", "elapsed_ms"}


def test_verify_translations(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "translations")
    reports = json.loads(out)
    assert code == 0 and [r["status"] for r in reports] == ["pass"] * 3
    assert "(-2,2,0,0)" in reports[0]["detail"]
    assert "(0,-2,2,0)" in reports[1]["detail"]
    assert "(0,0,-2,2)" in reports[2]["detail"]


def test_verify_integrals_reports_failure(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "integrals")
    reports = {r["check_id"]: r for r in json.loads(out)}
    assert code == 1
    assert reports["integrals.search.t_free"]["status"] == "pass"
    assert reports["integrals.search.window"]["status"] == "fail"
    assert reports["integrals.search.window"]["detail"]


def test_ansatz_command(capsys):
    code, out, _ = run(capsys, "ansatz", "--samples", "1", "--seed", "3")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "pass"
    again = run(capsys, "ansatz", "--samples", "1", "--seed", "3")[1]
    assert again == out
    assert run(capsys, "ansatz", "--samples", "0")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "painleve_d42", "verify", "--suite", "translations"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)
