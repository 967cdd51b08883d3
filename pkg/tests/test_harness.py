from __future__ import annotations

import json

import pytest

from higherhh import GF, QQ, truncated_poly
from higherhh.cli import main
from higherhh.harness import (
    CACHE_ENV, ScenarioError, bundled_scenario, bundled_scenario_names, expected_table,
    graded_commutative_table, parse_scenario_text, run_scenario, scenario_key, stability_compare,
)

KLEIN = {
    "name": "k", "task": "homology", "field": "F3", "space": {"type": "klein_bottle"},
    "algebra": {"family": "poly"}, "coefficients": "unpointed", "budgets": {"degree": 2, "weight": 2},
}


# -- golden tables ----------------------------------------------------------------

def test_golden_circle_poly():
    assert expected_table("HH1_Fp_poly").dims == {(0, 0): 1, (1, 1): 1}


def test_golden_divided_powers():
    t = expected_table("HH2_Fp_poly")
    assert t.max_degree == 6
    assert t.dims == {(0, 0): 1, (2, 1): 1, (4, 2): 1, (6, 3): 1}


def test_golden_truncated():
    assert expected_table("HHn_Q_trunc").by_degree() == [1, 1, 1, 1, 1]
    assert expected_table("HHn_Q_trunc", 5, 6, n=2).by_degree() == [1, 0, 1, 1, 1, 1]


def test_golden_bouquet_degree_two():
    assert expected_table("bouquet_T2_Q_trunc2", 2, 8).get(2) == 4
    assert expected_table("bouquet_T3_Q_trunc2", 2, 2).get(2, 2) == 6


def test_unknown_golden():
    with pytest.raises(KeyError):
        expected_table("HH_nonsense")


def test_graded_commutative_counter():
    # Λ(a) ⊗ k[b] with a odd of degree 1 and b even of degree 2
    t = graded_commutative_table([(1, 1), (2, 1)], 4, 4)
    assert t.by_degree() == [1, 1, 1, 1, 1]


# -- stability ----------------------------------------------------------------------

def test_stability_budget_error():
    with pytest.raises(ScenarioError):
        stability_compare(truncated_poly(QQ, 2), 3, 2, 2)


def test_stability_verdicts():
    rep = stability_compare(truncated_poly(GF(3), 2), 2, 2, 2)
    assert rep.verdicts[(2, 2)] == "torus smaller"
    assert rep.first_divergence[:2] == (2, 2)
    assert json.loads(json.dumps(rep.to_dict()))["first_divergence"][0] == 2


# -- parsing ------------------------------------------------------------------------------

def test_missing_field_has_path_and_line():
    text = '{\n  "name": "x",\n  "task": "homology",\n  "space": {"type": "sphere"},\n  "algebra": {"family": "poly"}\n}'
    with pytest.raises(ScenarioError) as e:
        parse_scenario_text(text)
    assert e.value.path == "space.n"


def test_bad_value_line():
    text = '{\n  "name": "x",\n  "task": "homology",\n  "field": "F4",\n  "space": {"type": "point"},\n  "algebra": {"family": "poly"}\n}'
    with pytest.raises(ScenarioError) as e:
        parse_scenario_text(text)
    assert e.value.path == "field" and e.value.line == 4


def test_json_syntax_error_line():
    with pytest.raises(ScenarioError) as e:
        parse_scenario_text('{\n  "name": "x",\n  oops\n}')
    assert e.value.line == 3


def test_yaml_scenario():
    text = "name: y\ntask: homology\nfield: Q\nspace:\n  type: sphere\n  n: 1\nalgebra:\n  family: truncated_poly\n  m: 2\nbudgets:\n  degree: 2\n  weight: 2\n"
    s = parse_scenario_text(text, "yaml")
    assert run_scenario(s, cache=False).report["tables"]["homology"] == {"0,0": 1, "1,1": 1, "2,2": 1}


def test_unknown_task():
    with pytest.raises(ScenarioError) as e:
        parse_scenario_text('{"name": "x", "task": "fly"}')
    assert e.value.path == "task"


def test_budget_limits():
    s = dict(KLEIN, budgets={"degree": 99})
    with pytest.raises(ScenarioError):
        run_scenario(s, cache=False)


# -- running and caching ---------------------------------------------------------------------

@pytest.mark.parametrize("name", bundled_scenario_names())
def test_bundled_scenarios_pass(name):
    assert run_scenario(bundled_scenario(name), cache=False).passed


def test_key_is_canonical():
    a = dict(KLEIN)
    b = {k: KLEIN[k] for k in reversed(list(KLEIN))}
    assert scenario_key(a) == scenario_key(b)
    assert scenario_key(a) != scenario_key(dict(KLEIN, field="F5"))


def test_cache_hit_is_byte_identical(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "cache"))
    first = run_scenario(KLEIN, tmp_path / "out1")
    second = run_scenario(KLEIN, tmp_path / "out2")
    assert not first.cached and second.cached
    for ext in ("json", "csv"):
        assert (tmp_path / "out1" / f"k.{ext}").read_bytes() == (tmp_path / "out2" / f"k.{ext}").read_bytes()
    assert (tmp_path / "out2" / "k.timings.json").exists()
    assert len(list((tmp_path / "cache").iterdir())) == 1


def test_corrupt_cache_recomputes(tmp_path):
    cdir = tmp_path / "c"
    good = run_scenario(KLEIN, cache_dir=cdir)
    (entry,) = cdir.iterdir()
    entry.write_text(entry.read_text()[:-40])
    again = run_scenario(KLEIN, cache_dir=cdir)
    assert not again.cached and again.report_text == good.report_text
    data = json.loads(entry.read_text())
    data["report"] = data["report"].replace('"passed": true', '"passed": false')
    entry.write_text(json.dumps(data))
    assert not run_scenario(KLEIN, cache_dir=cdir).cached


def test_parallel_matches_serial():
    s = dict(KLEIN, budgets={"degree": 3, "weight": 3})
    assert run_scenario(s, cache=False, jobs=1).report_text == run_scenario(s, cache=False, jobs=4).report_text


def test_failed_expectation_reported():
    s = dict(KLEIN, expect={"table": "HH1_Fp_poly"})
    r = run_scenario(s, cache=False)
    assert not r.passed
    assert r.report["checks"]["expected_table"]["first_divergence"] is not None


# -- command line ------------------------------------------------------------------------

def test_cli_homology(capsys, tmp_path):
    code = main(["homology", "--space", "sphere:1", "--algebra", "trunc:2", "--degree", "2",
                 "--weight", "2", "--no-cache", "--out", str(tmp_path)])
    assert code == 0
    assert "(2,2)=1" in capsys.readouterr().out
    assert (tmp_path / "homology.csv").read_text().startswith("table,degree,weight,dim\n")


def test_cli_failure_exit_code(capsys):
    code = main(["homology", "--space", "sphere:2", "--algebra", "poly", "--no-cache",
                 "--expect", "HH1_Q_poly"])
    assert code == 1


def test_cli_bad_input_exit_code(capsys):
    assert main(["homology", "--space", "cube", "--algebra", "poly", "--no-cache"]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["run", "no_such_scenario", "--no-cache"]) == 2


def test_cli_validate(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(KLEIN))
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "name": "b",\n  "task": "homology",\n  "space": {"type": "moebius"},\n  "algebra": {"family": "poly"}\n}')
    assert main(["validate", str(good)]) == 0
    assert main(["validate", str(bad)]) == 2
    assert "space.type" in capsys.readouterr().err


def test_cli_other_commands(capsys):
    assert main(["scenarios"]) == 0
    assert "klein_f3" in capsys.readouterr().out
    assert main(["stability", "--algebra", "trunc:2", "-n", "2", "--field", "F2", "--weight", "4", "--no-cache"]) == 0
    assert main(["diagonal", "-n", "2", "-k", "3", "--no-cache"]) == 0
    assert main(["e2", "klein_e2", "--no-cache"]) == 0
    assert main(["run", "klein_f3", "sphere1_Q_trunc", "--no-cache"]) == 0


@pytest.mark.parametrize("A", [truncated_poly(QQ, 2), truncated_poly(GF(3), 3)])
def test_stability_n1_is_equal(A):
    assert stability_compare(A, 1, 3, 3).equal


def test_golden_circle_by_degree():
    assert expected_table("HH1_Fp_poly").by_degree() == [1, 1, 0, 0]
