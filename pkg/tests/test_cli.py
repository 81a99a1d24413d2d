import csv
import io
import json
import math

import pytest

from discrete_analogue.cli import RunConfig, ConfigError, canonical_json, format_number, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def write_samples(path, fn, h, first, last):
    with open(path, "w") as fh:
        fh.write("index,value\n")
        for i in range(first, last + 1):
            fh.write(f"{i},{fn(i * h)!r}\n")
    return str(path)


def test_table_m1(capsys):
    code, out, _ = run(capsys, "table", "--m", "1", "--h", "1", "--radius", "3")
    assert code == 0
    rows = {int(r["beta"]): float(r["value"]) for r in csv_rows(out)}
    assert rows == {-3: 0.0, -2: 0.0, -1: 1.0, 0: -2.0, 1: 1.0, 2: 0.0, 3: 0.0}
    meta = [line for line in out.splitlines() if line.startswith("#")]
    assert any(line.startswith("# lambdas=") for line in meta)


def test_table_m2_json(capsys):
    code, out, _ = run(capsys, "table", "--m", "2", "--radius", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"meta", "rows"}
    assert {"m", "h", "lambdas", "amplitudes", "precision"} <= set(doc["meta"])
    value = {r["beta"]: r["value"] for r in doc["rows"]}[0]
    assert abs(value - 14.3538290724796) < 1e-12
    assert len(doc["rows"]) == 5


def test_table_h_scaling_radius_zero(capsys):
    code, out, _ = run(capsys, "table", "--m", "2", "--h", "0.5", "--radius", "0")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 1 and rows[0]["beta"] == "0"
    assert math.isclose(float(rows[0]["value"]), 16 * 14.353829072479583, rel_tol=1e-15)


def test_table_json_round_trip_byte_identical(capsys, tmp_path):
    path = tmp_path / "t.json"
    assert main(["table", "--m", "3", "--radius", "6", "--format", "json", "-o", str(path)]) == 0
    text = path.read_text()
    assert canonical_json(json.loads(text)) == text
    # the same command twice must give the same bytes
    again = tmp_path / "u.json"
    main(["table", "--m", "3", "--radius", "6", "--format", "json", "-o", str(again)])
    assert again.read_bytes() == path.read_bytes()


def test_table_digits(capsys):
    code, out, _ = run(capsys, "table", "--m", "2", "--radius", "1", "--digits", "20")
    assert code == 0
    value = {r["beta"]: r["value"] for r in csv_rows(out)}["0"]
    assert value == "14.353829072479582567"[: len(value)]
    assert len(value.replace(".", "").replace("-", "")) == 20


def test_format_number():
    assert format_number(0.1) == "0.1"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number(1 / 3, 5) == "0.33333"


def test_verify_passes(capsys):
    code, out, err = run(capsys, "verify", "--m", "1", "--h", "1")
    assert code == 0 and err == ""
    assert json.loads(out)["passed"] is True


def test_verify_m3_tol(capsys):
    code, out, _ = run(capsys, "verify", "--m", "3", "--h", "1", "--tol", "1e-10")
    assert code == 0
    assert all(c["passed"] for c in json.loads(out)["checks"])


def test_verify_failure_exit_1(capsys):
    code, _, err = run(capsys, "verify", "--m", "2", "--tol", "1e-40")
    assert code == 1
    assert "checks failed" in err


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--m", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["passed"] == "true" for r in rows)


@pytest.mark.parametrize("argv", [
    ["verify", "--m", "0"],
    ["table", "--m", "2", "--h", "-1"],
    ["table", "--m", "2", "--h", "abc"],
    ["table", "--m", "2", "--precision", "32"],
    ["table", "--m", "2", "--radius", "-1"],
    ["table"],
    ["bogus", "--m", "1"],
])
def test_config_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_apply_constant(capsys, tmp_path):
    path = write_samples(tmp_path / "c.csv", lambda x: 2.5, 0.5, -60, 60)
    code, out, _ = run(capsys, "apply", "--m", "2", "--h", "0.5", "--input", path)
    assert code == 0
    rows = csv_rows(out)
    assert rows and all(abs(float(r["value"])) < 1e-9 for r in rows)


def test_apply_quadratic_m1(capsys, tmp_path):
    path = write_samples(tmp_path / "q.csv", lambda x: x * x, 0.1, -20, 20)
    code, out, _ = run(capsys, "apply", "--m", "1", "--h", "0.1", "--input", path)
    assert code == 0
    rows = csv_rows(out)
    assert [int(r["index"]) for r in rows] == list(range(-19, 20))
    assert all(abs(float(r["value"]) - 2) < 1e-9 for r in rows)


def test_apply_window_too_small_exit_3(capsys, tmp_path):
    path = write_samples(tmp_path / "s.csv", math.sin, 1.0, 0, 10)
    code, out, err = run(capsys, "apply", "--m", "3", "--input", path)
    assert code == 3
    assert out == ""
    assert "margin" in err


@pytest.mark.parametrize("content", [
    "a,b\n1,2\n",
    "index,value\n0,1\n2,3\n",
    "index,value\n0,x\n",
    "index,value\n",
])
def test_apply_bad_input_exit_2(capsys, tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    code, _, err = run(capsys, "apply", "--m", "1", "--input", str(path))
    assert code == 2 and err


def test_apply_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "apply", "--m", "1", "--input", str(tmp_path / "nope.csv"))
    assert code == 2 and err


def test_symbol_examples(capsys):
    code, out, _ = run(capsys, "symbol", "--m", "2", "--p", "0", "0.25", "0.5")
    assert code == 0
    rows = csv_rows(out)
    assert abs(float(rows[0]["direct_sum"])) < 1e-30
    assert float(rows[0]["closed_form"]) == 0
    assert math.isclose(float(rows[2]["direct_sum"]), 48, rel_tol=1e-14)
    assert math.isclose(float(rows[2]["closed_form"]), 48, rel_tol=1e-14)
    code, out, _ = run(capsys, "symbol", "--m", "1", "--p", "0.25")
    row = csv_rows(out)[0]
    assert math.isclose(float(row["direct_sum"]), -2, rel_tol=1e-15)
    assert math.isclose(float(row["closed_form"]), -2, rel_tol=1e-15)


def test_symbol_json(capsys):
    code, out, _ = run(capsys, "symbol", "--m", "3", "--p", "0.1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["rows"][0]["residual"] < 1e-20
    assert canonical_json(doc) == out


def test_run_config_validate():
    RunConfig("table", m=2).validate()
    with pytest.raises(ConfigError):
        RunConfig("apply", m=2).validate()
    with pytest.raises(ConfigError):
        RunConfig("symbol", m=2).validate()
