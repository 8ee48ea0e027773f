import json

from click.testing import CliRunner

from irlab.cli import main
from irlab.model import serialize_profile
from hard_instances import two_camps_with_bridge, uneven_cohorts


def _write_profile(tmp_path, election, name="profile.avp"):
    path = tmp_path / name
    path.write_text(serialize_profile(election))
    return str(path)


def test_check_ir_satisfied_exit_zero(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["check", path, "--committee", "1,2", "--axiom", "ir"])
    assert result.exit_code == 0
    assert "satisfied" in result.output


def test_check_expect_unmet_exit_one(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["check", path, "--committee", "1,3", "--axiom", "ir", "--expect", "satisfied"],
    )
    assert result.exit_code == 1


def test_unknown_subcommand_exit_two():
    runner = CliRunner()
    result = runner.invoke(main, ["bogus"])
    assert result.exit_code == 2


def test_check_json_witness(tmp_path):
    path = _write_profile(tmp_path, uneven_cohorts())
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["check", path, "--committee", "1,2,3,4,9,10", "--axiom", "core", "--json"],
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["status"] == "violated"
    assert payload["witness"]["candidate_set"] == [5, 6, 7, 8]


def test_fvec_csv(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["fvec", path])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "voter,f,witness"
    assert len(lines) == 9
    assert lines[1].startswith("1,1,")


def test_fvec_vi_method(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["fvec", path, "--method", "vi"])
    assert result.exit_code == 0
    assert all(line.split(",")[1] == "1" for line in result.output.strip().splitlines()[1:])


def test_solve_objectives(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["solve", path, "--objective", "ir"])
    payload = json.loads(result.output)
    assert payload["status"] == "found"
    assert payload["committee"] == [1, 2]
    result = runner.invoke(
        main, ["solve", path, "--objective", "min-beta", "--expect", "found"]
    )
    assert result.exit_code == 0


def test_rule_json(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["rule", path, "--rule", "pav", "--all-tied"])
    payload = json.loads(result.output)
    assert payload["committees"] == [[1, 3], [2, 3]]


def test_recognize_all(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["recognize", path])
    payload = json.loads(result.output)
    assert payload["ci"]["candidate_order"] == [1, 3, 2]
    assert payload["vi"]["voter_order"] == list(range(1, 9))


def test_recognize_expect_exit(tmp_path):
    path = _write_profile(tmp_path, uneven_cohorts())
    runner = CliRunner()
    result = runner.invoke(
        main, ["recognize", path, "--domain", "ci", "--expect", "member"]
    )
    assert result.exit_code == 1


def test_construct_vi(tmp_path):
    path = _write_profile(tmp_path, two_camps_with_bridge())
    runner = CliRunner()
    result = runner.invoke(main, ["construct", path, "--domain", "vi"])
    payload = json.loads(result.output)
    assert len(payload["committee"]) == 2
    assert payload["guarantee"]["alpha"] == "2"
    assert payload["guarantee"]["beta"] == "4"


def test_construct_alpha_tr(tmp_path):
    from irlab.model import Election

    e = Election.from_approvals([{0}, {0, 1}, {0}, {0, 1}], m=2, k=2)
    path = _write_profile(tmp_path, e)
    tree = tmp_path / "tree.json"
    tree.write_text(json.dumps({"parent": [None, 1]}))
    runner = CliRunner()
    result = runner.invoke(
        main, ["construct", path, "--domain", "alpha-tr", "--tree", str(tree)]
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["committee"] == [1, 2]


def test_gen_writes_parseable_profile(tmp_path):
    out = tmp_path / "gen.avp"
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["gen", "--model", "urn", "--n", "10", "--m", "8", "--k", "3", "--seed", "7", "-o", str(out)],
    )
    assert result.exit_code == 0
    from irlab.model import parse_profile

    e = parse_profile(out.read_text())
    assert (e.n, e.m, e.k) == (10, 8, 3)


def test_experiment_cli_deterministic(tmp_path):
    runner = CliRunner()
    args = [
        "experiment",
        "--models",
        "ic",
        "--n",
        "10",
        "--m",
        "6",
        "--k-min",
        "2",
        "--k-max",
        "3",
        "--instances",
        "4",
        "--rules",
        "seq_cc",
        "--seed",
        "3",
        "--no-timing",
    ]
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    r1 = runner.invoke(main, args + ["--out", str(out1)])
    r2 = runner.invoke(main, args + ["--out", str(out2), "--jobs", "2"])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert (out1 / "results.csv").read_text() == (out2 / "results.csv").read_text()


def test_gen_rejects_bad_model():
    runner = CliRunner()
    result = runner.invoke(main, ["gen", "--model", "zipf", "--n", "5", "--m", "5"])
    assert result.exit_code == 2
