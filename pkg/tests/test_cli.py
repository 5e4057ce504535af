import json

import pytest

from liaison_lab.cli import load_points, main
from liaison_lab.errors import ParseError
from liaison_lab.field import PrimeField
from liaison_lab.harness import SCHEMA, RunConfig, exit_code, run_suite, run_trial, trial_seed

F = PrimeField(31991)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in ("wall_time", "total_wall_time")}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


@pytest.fixture
def points_file(tmp_path):
    def write(data):
        p = tmp_path / "pts.json"
        p.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(p)
    return write


def test_identities_suite(capsys):
    code = main(["run", "--suite", "identities", "--r-min", "1", "--r-max", "10", "--format", "json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema"] == SCHEMA and report["aggregate_pass"]
    names = {(r["theorem"], r["r"]) for r in report["results"]}
    assert ("dimension-identity", 1) in names and ("riemann-roch", 10) in names
    assert ("riemann-roch", 1) not in names


def test_small_prime_is_a_config_error(capsys):
    code = main(["run", "--suite", "tangential", "--prime", "97", "--r-min", "3", "--r-max", "3",
                 "--format", "json"])
    assert code == 2
    report = json.loads(capsys.readouterr().out)
    assert report["error"].startswith("FieldTooSmall") and not report["aggregate_pass"]


@pytest.mark.parametrize("argv", [
    ["run", "--prime", "100"],
    ["run", "--suite", "triangular", "--r-min", "2"],
    ["run", "--trials", "0"],
    ["run", "--r-min", "5", "--r-max", "4"],
])
def test_config_errors(argv, capsys):
    assert main(argv) == 2


def test_report_schema_and_determinism(tmp_path):
    cfg = RunConfig(seed=42, trials=2, r_min=3, r_max=3, suite="triangular", format="json")
    a, b = run_suite(cfg), run_suite(cfg)
    ja, jb = json.loads(a.to_json()), json.loads(b.to_json())
    assert strip_timing(ja) == strip_timing(jb)
    assert set(ja) >= {"schema", "config", "results", "aggregate_pass", "version"}
    for res in ja["results"]:
        assert set(res) >= {"theorem", "r", "trials", "passes", "failures", "h0_ledger"}
        assert res["passes"] + len(res["failures"]) == res["trials"]
    assert exit_code(a) == 0
    # parallel execution merges to the same report
    par = run_suite(RunConfig(seed=42, trials=2, r_min=3, r_max=3, suite="triangular", format="json", jobs=2))
    jp = strip_timing(json.loads(par.to_json()))
    jp["config"]["jobs"] = 1
    assert jp == strip_timing(ja)


def test_trial_reproduction_from_seed():
    seed = trial_seed(42, "lemma1-divisor", 3, 1)
    cfg = RunConfig(seed=42, trials=2, r_min=3, r_max=3, suite="triangular")
    rep = next(r for r in run_suite(cfg).results if r.theorem == "lemma1-divisor")
    again = run_trial(31991, "lemma1-divisor", 3, seed)
    assert again.ledger == {k: v for k, v in rep.h0_ledger[1].items() if k != "trial"}


def test_failure_entries_carry_reproduction_state(monkeypatch):
    import liaison_lab.harness as h
    from liaison_lab.liaison import TrialOutcome

    monkeypatch.setitem(h._BY_NAME, "resolution-tangential",
                        (5, h.THEOREMS[5][:3] + (lambda f, r, g: TrialOutcome(False, {}, "forced"),)))
    rep = run_suite(RunConfig(seed=1, trials=2, r_min=1, r_max=1, suite="tangential"))
    assert exit_code(rep) == 1 and not rep.aggregate_pass
    res = next(r for r in rep.results if r.theorem == "resolution-tangential")
    assert len(res.failures) == 2
    f = res.failures[0]
    assert f["seed"] == trial_seed(1, "resolution-tangential", 1, 0)
    assert f["suite"] == "tangential" and f["r"] == 1 and f["stream"] == [5, 1, 0]


def test_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["run", "--suite", "identities", "--format", "json", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["aggregate_pass"]


def test_betti_command(points_file, capsys):
    conic = [[t * t, t, 1] for t in range(1, 7)]
    assert main(["betti", "--points", points_file(conic), "--format", "json"]) == 0
    got = json.loads(capsys.readouterr().out)
    assert got["beta0"] == {"2": 1, "3": 1} and got["beta1"] == {"5": 1}
    assert got["stable_value"] == 6
    assert main(["betti", "--points", points_file([[5, 7, 1]]), "--dmax", "3"]) == 0
    out = capsys.readouterr().out
    assert "beta0: {1: 2}" in out and "hilbert" in out


@pytest.mark.parametrize("bad", ["not json", "{}", "[[1, 0]]", "[[0, 0, 0]]", "[[1, 2, 3], [2, 4, 6]]",
                                 "[[1.5, 0, 1]]"])
def test_betti_parse_errors(bad, points_file, capsys):
    assert main(["betti", "--points", points_file(bad)]) == 2
    with pytest.raises(ParseError):
        load_points(points_file(bad), F)


def test_betti_dmax_too_small(points_file, capsys):
    assert main(["betti", "--points", points_file([[t * t, t, 1] for t in range(1, 7)]), "--dmax", "3"]) == 2
    assert "DegreeOutOfRange" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["betti", "--points", "/nonexistent/pts.json"]) == 2
