import json

import jsonschema
import pytest

from mdgp import Grouping, objective_value
from mdgp.cli import (
    ParseError,
    REPORT_SCHEMA,
    demonstrate,
    gen_instance,
    main,
    parse_instance,
    parse_solution,
    worked_example_instance,
)
from conftest import TOL

WORKED_FILE = "6 3 2 3\nATTR 1\nnum\n1\n2\n3\n4\n5\n6\n"


# ---------------------------------------------------------------------------
# parse_instance
# ---------------------------------------------------------------------------

def test_parse_attr_worked_example():
    loaded = parse_instance(WORKED_FILE, metric="manhattan")
    inst = loaded.instance
    assert (inst.n, inst.G, inst.a, inst.b) == (6, 3, 2, 3)
    assert inst.dist.lookup(1, 5) == 4.0
    assert loaded.table is not None
    assert loaded.warnings == ()


def test_parse_dist_section():
    text = "3 1 3 3\nDIST\n1.5 2.5\n3.5\n"
    loaded = parse_instance(text)
    d = loaded.instance.dist
    assert (d.lookup(1, 2), d.lookup(1, 3), d.lookup(2, 3)) == (1.5, 2.5, 3.5)
    assert loaded.table is None


def test_parse_all_zero_distances_is_valid():
    text = "4 2 2 2\nDIST\n0 0 0\n0 0\n0\n"
    loaded = parse_instance(text)
    assert loaded.instance.n == 4
    # with all-zero distances, any feasible grouping is optimal at 0
    from mdgp import solve_bruteforce

    assert solve_bruteforce(loaded.instance).value == 0.0


def test_parse_comments_and_blanks_ignored():
    text = "# instance\n\n3 1 3 3\n# body\nDIST\n1 2\n# another\n3\n"
    assert parse_instance(text).instance.n == 3


def test_parse_negative_distance_warns():
    text = "3 1 3 3\nDIST\n-1 2\n3\n"
    loaded = parse_instance(text)
    assert loaded.warnings and "negative" in loaded.warnings[0]


def test_parse_infeasible_header():
    with pytest.raises(ParseError, match="infeasible instance"):
        parse_instance("7 3 2 2\nDIST\n" + "\n".join("0 " * (7 - i) for i in range(1, 7)))


def test_parse_a_greater_than_b():
    with pytest.raises(ParseError):
        parse_instance("6 3 2 1\nATTR 1\nnum\n1\n2\n3\n4\n5\n6\n")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        parse_instance("3 1 3 3\nDIST\n1 oops\n3\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_instance("3 1\nDIST\n1 2\n3\n")


def test_parse_wrong_row_width():
    with pytest.raises(ParseError, match="needs 2 values"):
        parse_instance("3 1 3 3\nDIST\n1\n3\n")


# ---------------------------------------------------------------------------
# gen_instance
# ---------------------------------------------------------------------------

def test_gen_is_deterministic():
    a = gen_instance(6, 3, 2, 3, kind="uniform1d", seed=7)
    b = gen_instance(6, 3, 2, 3, kind="uniform1d", seed=7)
    assert a == b
    assert gen_instance(6, 3, 2, 3, kind="uniform1d", seed=8) != a


@pytest.mark.parametrize("kind", ["uniform1d", "uniformkd:3", "mixed:2,1", "mixed:0,2"])
def test_gen_output_reparses(kind):
    text = gen_instance(8, 2, 3, 5, kind=kind, seed=11)
    metric = "gower" if "mixed" in kind else "manhattan"
    loaded = parse_instance(text, metric=metric)
    assert loaded.instance.n == 8
    assert loaded.instance.G == 2


def test_gen_rejects_bad_bounds():
    with pytest.raises(ValueError, match="invalid bounds"):
        gen_instance(6, 3, 3, 3, seed=1)
    with pytest.raises(ValueError, match="kind"):
        gen_instance(6, 3, 2, 3, kind="nope", seed=1)


# ---------------------------------------------------------------------------
# solution files
# ---------------------------------------------------------------------------

def test_parse_solution_order_insensitive():
    groups = parse_solution("5 1\n# comment\n2 4\n3 6\n")
    assert Grouping(groups).groups == ((1, 5), (2, 4), (3, 6))


def test_parse_solution_rejects_garbage():
    with pytest.raises(ParseError, match="line 1"):
        parse_solution("one two\n")


# ---------------------------------------------------------------------------
# demonstrate
# ---------------------------------------------------------------------------

def test_demonstrate_report_values():
    rep = demonstrate()
    assert rep.correct_value == 9.0
    assert rep.degree_only_value == 16.0
    assert rep.violated == ("lcount",)
    assert rep.correct_groups == ((1, 5), (2, 4), (3, 6))
    assert rep.degree_only_groups == ((1, 3, 6), (2, 4, 5))
    assert rep.summary() == "correct: 9, degree-only: 16, violated: lcount"


def test_demonstrate_idempotent():
    assert demonstrate() == demonstrate()


# ---------------------------------------------------------------------------
# command flows (exit codes + JSON schema)
# ---------------------------------------------------------------------------

@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked.txt"
    path.write_text(WORKED_FILE)
    return path


def _solve_json(capsys, *argv) -> dict:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_cmd_solve_bnb_json(worked_file, capsys):
    code, report = _solve_json(
        capsys, "solve", "--input", str(worked_file), "--solver", "bnb", "--json"
    )
    assert code == 0
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["value"] == 9.0
    assert report["proven"] is True
    # reported value re-evaluates bit-equal on the reported grouping
    inst = worked_example_instance()
    g = Grouping([tuple(grp) for grp in report["groups"]])
    assert objective_value(g, inst.dist) == report["value"]


def test_cmd_solve_bruteforce_and_heuristic(worked_file, capsys):
    code, report = _solve_json(
        capsys, "solve", "--input", str(worked_file), "--solver", "bruteforce", "--json"
    )
    assert code == 0 and report["value"] == 9.0
    jsonschema.validate(report, REPORT_SCHEMA)

    code, report = _solve_json(
        capsys,
        "solve", "--input", str(worked_file),
        "--solver", "heuristic", "--restarts", "10", "--seed", "1", "--json",
    )
    assert code == 0
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["value"] <= 9.0 + TOL
    assert report["proven"] is False
    assert report["gap"] == pytest.approx(9.0 - report["value"], abs=TOL)


def test_cmd_solve_heuristic_requires_seed(worked_file, capsys):
    code = main(["solve", "--input", str(worked_file), "--solver", "heuristic"])
    assert code == 2
    assert "--seed" in capsys.readouterr().err


def test_cmd_solve_time_limit_exit_code(tmp_path, capsys):
    # a generous instance with a tiny budget finishes unproven -> exit 3
    text = gen_instance(12, 3, 3, 5, kind="uniform1d", seed=3)
    path = tmp_path / "big.txt"
    path.write_text(text)
    code = main(
        ["solve", "--input", str(path), "--solver", "bnb", "--time-limit", "1e-4", "--json"]
    )
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, REPORT_SCHEMA)
    if report["proven"]:  # finished within budget on a fast machine
        assert code == 0
    else:
        assert code == 3


def test_cmd_solve_export_only(worked_file, tmp_path, capsys):
    lp_path = tmp_path / "model.lp"
    code = main(
        ["solve", "--input", str(worked_file), "--export-lp", str(lp_path),
         "--model", "degree-only"]
    )
    assert code == 0
    assert "exported" in capsys.readouterr().out
    text = lp_path.read_text()
    assert "Binaries" in text and "y_2" not in text


def test_cmd_solve_export_n3(tmp_path, capsys):
    src = tmp_path / "tiny.txt"
    src.write_text("3 1 3 3\nDIST\n1 2\n3\n")
    lp_path = tmp_path / "tiny.lp"
    code = main(["solve", "--input", str(src), "--export-lp", str(lp_path)])
    assert code == 0
    binaries_line = [
        line for line in lp_path.read_text().splitlines() if line.startswith(" x_")
    ]
    assert "x_1_2 x_1_3 x_2_3" in binaries_line[-1]


def test_cmd_solve_degree_only_refusal(worked_file, capsys):
    code = main(
        ["solve", "--input", str(worked_file), "--model", "degree-only",
         "--solver", "bruteforce"]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert "demonstrate" in err


def test_cmd_solve_equal_model_conflict(tmp_path, capsys):
    path = tmp_path / "odd.txt"
    path.write_text("5 2 2 3\nDIST\n1 1 1 1\n1 1 1\n1 1\n1\n")
    code = main(["solve", "--input", str(path), "--model", "equal", "--solver", "bnb"])
    assert code == 2
    assert "inapplicable" in capsys.readouterr().err


def test_cmd_demonstrate_json(capsys):
    code = main(["demonstrate", "--json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["correct"]["value"] == 9.0
    assert report["degree_only"]["value"] == 16.0
    assert report["degree_only"]["groups"] == [[1, 3, 6], [2, 4, 5]]
    assert report["violated"] == ["lcount"]


def test_cmd_verify_feasible(worked_file, tmp_path, capsys):
    sol = tmp_path / "sol.txt"
    sol.write_text("1 5\n2 4\n3 6\n")
    code = main(
        ["verify", "--input", str(worked_file), "--solution", str(sol),
         "--against-oracle", "--json"]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["feasible"] is True
    assert report["value"] == 9.0
    assert report["gap"] == 0.0


def test_cmd_verify_infeasible_still_reports_value(worked_file, tmp_path, capsys):
    sol = tmp_path / "sol.txt"
    sol.write_text("1 3 6\n2 4 5\n")
    code = main(["verify", "--input", str(worked_file), "--solution", str(sol)])
    out = capsys.readouterr().out
    assert code == 2
    assert "value: 16" in out
    assert "feasible: no" in out


def test_cmd_verify_duplicate_element(worked_file, tmp_path, capsys):
    sol = tmp_path / "sol.txt"
    sol.write_text("1 1 2\n3 4 5 6\n")
    code = main(["verify", "--input", str(worked_file), "--solution", str(sol)])
    assert code == 2
    assert "twice" in capsys.readouterr().out


def test_cmd_verify_out_of_range_and_missing(worked_file, tmp_path, capsys):
    sol = tmp_path / "sol.txt"
    sol.write_text("1 2 9\n3 4 5\n")
    assert main(["verify", "--input", str(worked_file), "--solution", str(sol)]) == 2
    capsys.readouterr()
    sol.write_text("1 2\n3 4\n")
    assert main(["verify", "--input", str(worked_file), "--solution", str(sol)]) == 2
    assert "not covered" in capsys.readouterr().out


def test_cmd_gen_roundtrip(tmp_path, capsys):
    out = tmp_path / "gen.txt"
    code = main(
        ["gen", "--n", "9", "--g", "3", "--a", "3", "--b", "3",
         "--kind", "uniformkd:2", "--seed", "1", "--output", str(out)]
    )
    assert code == 0
    loaded = parse_instance(out.read_text(), metric="euclidean")
    assert loaded.instance.n == 9


def test_cmd_gen_bad_bounds(capsys):
    code = main(["gen", "--n", "6", "--g", "4", "--a", "2", "--b", "3", "--seed", "1"])
    assert code == 2
    assert "invalid bounds" in capsys.readouterr().err


def test_cmd_solve_missing_file(capsys):
    code = main(["solve", "--input", "/nonexistent/file.txt"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cmd_solve_workers_flag(worked_file, capsys):
    reports = []
    for w in ("1", "2"):
        code, report = _solve_json(
            capsys, "solve", "--input", str(worked_file), "--workers", w, "--json"
        )
        assert code == 0
        reports.append(report)
    assert reports[0]["value"] == reports[1]["value"]
    assert reports[0]["groups"] == reports[1]["groups"]
    assert reports[0]["nodes"] == reports[1]["nodes"]


def test_cmd_solve_schema_error_on_categorical_manhattan(tmp_path, capsys):
    path = tmp_path / "mixed.txt"
    path.write_text("4 2 2 2\nATTR 2\nnum cat\n1 x\n2 y\n3 x\n4 y\n")
    code = main(["solve", "--input", str(path), "--metric", "manhattan"])
    assert code == 2
    assert "all-numeric" in capsys.readouterr().err


def test_cmd_solve_bad_numeric_flags(worked_file, capsys):
    code = main(
        ["solve", "--input", str(worked_file), "--solver", "heuristic",
         "--restarts", "0", "--seed", "1"]
    )
    assert code == 2
    assert "restarts" in capsys.readouterr().err
    code = main(["solve", "--input", str(worked_file), "--workers", "0"])
    assert code == 2
    assert "workers" in capsys.readouterr().err
