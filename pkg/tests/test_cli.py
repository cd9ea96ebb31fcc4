import json

import pytest

from fusioninv import numeric
from fusioninv.catalog import builtin_solution
from fusioninv.cli import main
from fusioninv.symbols import dump_solution


@pytest.fixture(autouse=True)
def restore_precision():
    yield
    numeric.set_precision(numeric.DEFAULT_PRECISION)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_fib_and_yanglee(capsys):
    code, out, _ = run(capsys, "classify", "fib.ring", "fib.sol", "yanglee.sol")
    assert code == 0
    assert out.strip().endswith("2 gauge classes, 2 monoidal classes")


def test_aut_repds3(capsys):
    code, out, _ = run(capsys, "aut", "repds3.ring")
    assert code == 0
    assert out.splitlines()[-1] == "order 48"
    assert out.splitlines()[0] == "()"


def test_invariant_basis_fib(capsys, tmp_path):
    path = tmp_path / "fib.basis.json"
    code, _, err = run(capsys, "invariant-basis", "fib", "-o", str(path))
    assert code == 0 and "12 monomials" in err
    data = json.loads(path.read_text())
    assert data["schema"] == 1 and len(data["monomials"]) == 12
    assert data["coverage"]["complete"]


def test_basis_round_trips_through_evaluate_and_localize(capsys, tmp_path):
    basis = tmp_path / "b.json"
    run(capsys, "invariant-basis", "fib", "-o", str(basis))
    code, out, _ = run(capsys, "evaluate", "fib", "fib", str(basis))
    assert code == 0
    record = json.loads(out)
    assert len(record["values"]) == 12
    assert record["values"][0]["monomial_index"] == 0
    code, out, _ = run(capsys, "localize", "fib", str(basis))
    assert code == 0
    assert out.splitlines()[-1] == "33 localized equations (50 pentagon instances)"
    code, out, _ = run(capsys, "localize", "fib", str(basis), "--all")
    assert out.splitlines()[-1].startswith("50 localized")


def test_tampered_basis_is_an_internal_error(capsys, tmp_path):
    basis = tmp_path / "b.json"
    run(capsys, "invariant-basis", "fib", "-o", str(basis))
    data = json.loads(basis.read_text())
    data["monomials"].pop()
    basis.write_text(json.dumps(data))
    code, _, err = run(capsys, "evaluate", "fib", "fib", str(basis))
    assert code == 5 and "internal consistency" in err


def test_solution_file_round_trip(capsys, tmp_path, fib):
    path = tmp_path / "mine.json"
    dump_solution(builtin_solution("yanglee", fib), path, "fib")
    code, out, _ = run(capsys, "verify", "fib", str(path))
    assert code == 0 and "passes" in out
    code, out, _ = run(capsys, "galois", "fib", str(path))
    assert code == 0 and "rational no" in out


def test_verify_failure_exit_code(capsys, tmp_path, fib):
    path = tmp_path / "bad.json"
    dump_solution(builtin_solution("fib", fib), path, "fib")
    data = json.loads(path.read_text())
    data["values"][-1]["re"] = str(float(data["values"][-1]["re"]) + 1e-2)
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "fib", str(path))
    assert code == 4 and "FAILS" in out


def test_galois_trivial(capsys):
    code, out, _ = run(capsys, "galois", "trivial", "trivial")
    assert code == 0
    assert "rational yes" in out


def test_validate_and_invalid_ring(capsys, tmp_path):
    assert run(capsys, "validate", "fib")[0] == 0
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"basis": ["1", "tau"], "unit": "1", "dual": {"1": "1", "tau": "tau"},
                                  "fusion": [["1", "1", "1"], ["1", "tau", "tau"], ["tau", "tau", "1"],
                                             ["tau", "tau", "tau"]]}))
    code, out, _ = run(capsys, "validate", str(broken))
    assert code == 3 and "associativity" in out
    assert run(capsys, "phi", str(broken))[0] == 3


def test_parse_errors(capsys, tmp_path):
    assert run(capsys, "aut", "no-such-ring")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, err = run(capsys, "aut", str(bad))
    assert code == 2 and "line 1" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert run(capsys, "aut", "fib", "--precision", "10")[0] == 1
    assert run(capsys, "aut", "fib", "--tol", "1e-60")[0] == 1
    assert run(capsys, "orbit", "fib", "--zeros", "pattern1")[0] == 1
    assert run(capsys, "classify", "fib")[0] == 1


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "precision": 30}))
    code, out, _ = run(capsys, "gauge-test", "fib", "fib", "--n", "5", "--config", str(cfg))
    assert code == 0 and "from seed 5" in out
    code, out, _ = run(capsys, "gauge-test", "fib", "fib", "--n", "5", "--config", str(cfg), "--seed", "7")
    assert "from seed 7" in out
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert run(capsys, "aut", "fib", "--config", str(cfg))[0] == 2


def test_gauge_test(capsys):
    code, out, _ = run(capsys, "gauge-test", "fib", "fib", "--n", "100", "--seed", "3", "--verify")
    assert code == 0
    assert "100 gauges from seed 3: 0 failure(s)" in out


def test_counts(capsys):
    assert run(capsys, "pentagon", "fib")[1] == "50 pentagon equations\n"
    assert len(run(capsys, "phi", "repds3")[1].splitlines()) == 2948
    assert len(run(capsys, "gamma", "repds3")[1].splitlines()) == 116
    code, out, _ = run(capsys, "pentagon", "trivial", "--dump")
    assert out.splitlines()[0].startswith("1 1 1 1 1 1 1 1 1\t+ ")


def test_matrix_tsv(capsys):
    code, out, _ = run(capsys, "matrix", "fib")
    rows = [line.split("\t")[1:] for line in out.splitlines()[2:]]
    assert code == 0 and len(rows) == 15
    assert rows[1] == ["1", "-1", "0", "0", "0"]


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "repds3", "--zeros", "pattern2")
    assert code == 0 and out.splitlines()[-1] == "stabilizer order 16, orbit size 3"
    code, out, _ = run(capsys, "orbit", "repds3", "--zeros", "pattern1", "--json")
    data = json.loads(out)
    assert (data["stabilizer_order"], data["orbit_size"]) == (8, 6)


def test_zero_set_file(capsys, tmp_path):
    zeros = tmp_path / "z.json"
    zeros.write_text(json.dumps({"ring": "fib", "zeros": [dict(zip("abcdef", ["tau"] * 6))]}))
    code, out, _ = run(capsys, "matrix", "fib", "--zeros", str(zeros))
    assert code == 0 and out.startswith("# rows: 14, cols: 5")


def test_classify_standins_json(capsys):
    code, out, _ = run(capsys, "classify", "repds3", "--repds3-standins", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["summary"] == "20 gauge classes, 5 monoidal classes"
    assert len(data["zero_sets"]) == 10


def test_outputs_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "classify", "fib", "fib", "yanglee", "--json", "-o", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    first = run(capsys, "gauge-test", "fib", "fib", "--n", "10", "--seed", "4")[1]
    assert run(capsys, "gauge-test", "fib", "fib", "--n", "10", "--seed", "4")[1] == first
