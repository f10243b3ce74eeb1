import csv
import io
import json
import math

import pytest

from thuemorse.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range_is_inclusive():
    assert list(parse_range("0:1:0.25")) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(parse_range("0:40:0.1")) == 401
    with pytest.raises(ValueError):
        parse_range("1:0:0.1")
    with pytest.raises(ValueError):
        parse_range("0:1")


def test_pressure_csv(capsys):
    code, out, _ = run(capsys, "pressure", "--n", "12", "--t", "0:1:0.5")
    assert code == 0
    assert out.startswith("t,p\r\n")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "p"] and len(rows) == 4
    assert float(rows[1][1]) == pytest.approx(math.log(2), abs=1e-12)
    assert float(rows[3][1]) == pytest.approx(math.log(2), abs=1e-9)
    # 17 significant digits
    assert rows[1][1] == format(float(rows[1][1]), ".17g")


def test_restricted_pressure_json(capsys):
    code, out, _ = run(capsys, "pressure", "--restricted", "2", "--n", "12", "--t", "-1:1:1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [r["t"] for r in data] == [-1.0, 0.0, 1.0]


def test_pressure_to_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["--threads", "2", "pressure", "--n", "14", "--t", "0:5:0.5", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_spectrum_endpoint(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "birkhoff", "--n", "16", "--alpha", "-0.7:0.45:0.05")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["alpha", "value"]
    assert float(rows[0]["value"]) == pytest.approx(1.0)
    assert float(rows[-1]["value"]) == 0.0


def test_dimension_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "dimension", "--n", "12", "--alpha", "0.5:2:0.5")
    assert code == 0
    assert len(list(csv.reader(io.StringIO(out)))) == 5


def test_entropy_json(capsys):
    code, out, _ = run(capsys, "entropy", "--digits", "10")
    assert code == 0
    data = json.loads(out)
    assert set(data) >= {"h", "D1", "energy_exponent", "S", "digits_validated"}
    assert data["h_decimal"].startswith("0.5063839954")
    assert abs(data["h"] - 0.5063839954473197) < 1e-15


def test_measure_json(capsys):
    code, out, _ = run(capsys, "measure", "--word", "0110", "--level", "12", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"word", "level", "mass", "gibbs_bound", "pass"}
    assert data["word"] == "0110" and data["pass"] is True


def test_localdim_singular_serialises_inf(capsys):
    code, out, _ = run(capsys, "localdim", "--x", "1/4", "--n", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["psi_n"] == "-inf" and rows[0]["local_dimension"] == "inf"


def test_localdim_one_third(capsys):
    code, out, _ = run(capsys, "localdim", "--x", "1/3", "--n", "40")
    data = json.loads(out)
    assert data["local_dimension"] == pytest.approx(2 - math.log(3) / math.log(2), abs=1e-12)


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "pressure", "--n", "40")[0] == 2
    assert run(capsys, "pressure", "--t", "2:1:1")[0] == 2
    assert run(capsys, "localdim", "--x", "3/2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_level_cap_env(monkeypatch, capsys):
    monkeypatch.setenv("TM_MAX_LEVEL", "8")
    assert run(capsys, "measure", "--word", "01", "--level", "9")[0] == 2


def test_verify_symbolic(capsys):
    code, out, err = run(capsys, "verify", "--suite", "symbolic")
    assert code == 0
    assert "[PASS]" in err
    assert out.splitlines()[0] == "name,expected,observed,tolerance,pass"


def test_verify_reports_failure_with_exit_1(monkeypatch, capsys):
    from thuemorse import verify

    monkeypatch.setitem(verify.SUITES, "symbolic", [("always fails", lambda: ("x", "y", "0", False))])
    assert run(capsys, "verify", "--suite", "symbolic")[0] == 1


def test_figures(tmp_path, capsys):
    code, _, _ = run(capsys, "figures", "--out-dir", str(tmp_path), "--n", "12")
    assert code == 0
    for name in ("b_spectrum", "psi_humps", "birkhoff_humps", "pressure_asymptotes"):
        assert (tmp_path / f"{name}.csv").exists()
        assert (tmp_path / f"{name}.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    rows = list(csv.DictReader(io.StringIO((tmp_path / "psi_humps.csv").read_text())))
    assert len(rows) == 10_000
    # psi(4x) has four humps: four local maxima on the grid
    y = [float(r["psi_4x"]) for r in rows]
    peaks = sum(1 for i in range(1, len(y) - 1) if y[i - 1] < y[i] >= y[i + 1])
    assert peaks == 4
    p = list(csv.DictReader(io.StringIO((tmp_path / "pressure_asymptotes.csv").read_text())))
    by_t = {float(r["t"]): float(r["p"]) for r in p}
    assert by_t[0.0] == pytest.approx(math.log(2), abs=1e-12)
    assert by_t[1.0] == pytest.approx(math.log(2), abs=1e-9)


def test_figure_csv_is_reproducible(tmp_path, capsys):
    for d in ("a", "b"):
        assert main(["figures", "--figure", "birkhoff_humps", "--out-dir", str(tmp_path / d)]) == 0
    for suffix in ("csv", "png"):
        assert (tmp_path / "a" / f"birkhoff_humps.{suffix}").read_bytes() == (tmp_path / "b" / f"birkhoff_humps.{suffix}").read_bytes()
