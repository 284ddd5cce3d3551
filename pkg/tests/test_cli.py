"""End-to-end subcommand tests: exit codes, reports, config, determinism."""

import json

import pytest

import latvoa.cli as cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_lattice_info_two_by_two(capsys):
    code, out = run(capsys, "lattice-info", "--n", "2", "--l", "2")
    assert code == 0
    data = json.loads(out)
    assert data["ambient"] == {"rank": 2, "det": 4}
    assert data["diagonal"]["gram"] == [[4]]
    assert data["difference"]["gram"] == [[4]]
    assert data["difference"]["dual_quotient_size"] == 4
    assert data["orthogonal"] is True


def test_lattice_info_three_by_two(capsys):
    code, out = run(capsys, "lattice-info", "--n", "3", "--l", "2")
    assert code == 0
    data = json.loads(out)
    assert data["ambient"] == {"rank": 4, "det": 9}
    assert data["diagonal"]["gram"] == [[4, -2], [-2, 4]]
    assert data["difference"]["gram"] == [[4, -2], [-2, 4]]
    assert data["diagonal"]["det"] == 12


def test_duality_small(capsys):
    code, out = run(capsys, "duality", "--n", "2", "--l", "2", "--cutoff", "3")
    assert code == 0
    data = json.loads(out)
    assert data["coset_dims"] == [1, 0, 1, 1]
    assert data["parafermion_dims"] == [1, 0, 1, 1]
    assert all(row["equal"] for row in data["per_weight"])
    assert data["ok"] is True


def test_levi_duality_comp_parsing(capsys):
    code, out = run(capsys, "levi-duality", "--n", "2", "--comp", "1,1",
                    "--cutoff", "3")
    assert code == 0
    data = json.loads(out)
    assert data["composition"] == [1, 1]
    assert data["l"] == 2
    assert data["tensor_coset_dims"] == data["relative_parafermion_dims"]


def test_levi_duality_bad_comp_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["levi-duality", "--n", "2", "--comp", "1,x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["levi-duality", "--n", "2"])
    assert exc.value.code == 2


def test_virasoro_lattice_candidate(capsys):
    code, out = run(capsys, "virasoro", "--n", "2", "--l", "2",
                    "--which", "lattice", "--cutoff", "6")
    assert code == 0
    data = json.loads(out)
    assert data["results"][0]["c"] == "2"
    assert data["results"][0]["ok"] is True


def test_virasoro_row_coset_half_charge(capsys):
    code, out = run(capsys, "virasoro", "--n", "2", "--l", "2",
                    "--which", "row-coset", "--cutoff", "6")
    assert code == 0
    data = json.loads(out)
    assert data["results"][0]["c"] == "1/2"
    assert data["weight_bound"] == 3


def test_virasoro_quadratic_pair_needs_two_factors(capsys):
    code = cli.main(["virasoro", "--n", "2", "--l", "3",
                     "--which", "quadratic-pair", "--cutoff", "6"])
    assert code == 2
    err = capsys.readouterr().err
    assert "l = 2" in err


def test_map_check_small(capsys):
    code, out = run(capsys, "map-check", "--n", "2", "--l", "2",
                    "--cutoff", "4")
    assert code == 0
    data = json.loads(out)
    assert data["transposition"]["ok"] is True
    assert data["negation"]["ok"] is True
    assert data["generator_subalgebra_dims"]["pushed_equal"] is True
    assert data["closure_sample_failures"] == 0
    assert data["negative_control_fails"] is True


def test_reports_identical_across_threads(tmp_path, capsys):
    for fmt in ("json", "csv"):
        paths = []
        for threads in ("1", "2"):
            p = tmp_path / f"report-{fmt}-{threads}"
            code = cli.main(["duality", "--n", "2", "--l", "2",
                             "--cutoff", "3", "--threads", threads,
                             "--format", fmt, "--out", str(p)])
            assert code == 0
            assert capsys.readouterr().out == ""
            paths.append(p)
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_csv_is_flat_projection(capsys):
    code, out = run(capsys, "virasoro", "--n", "2", "--l", "2",
                    "--which", "row-coset", "--cutoff", "6",
                    "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "path,value"
    assert "results.0.c,1/2" in lines
    assert "ok,True" in lines


def test_config_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "l": 2, "cutoff": 3}))
    code, out = run(capsys, "duality", "--config", str(cfg))
    assert code == 0
    data = json.loads(out)
    assert data["cutoff"] == 3
    # explicit flag wins over the config value
    code, out = run(capsys, "duality", "--config", str(cfg), "--cutoff", "2")
    assert code == 0
    assert json.loads(out)["cutoff"] == 2


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "l": 2, "bogus": 1}))
    with pytest.raises(SystemExit) as exc:
        cli.main(["duality", "--config", str(cfg)])
    assert exc.value.code == 2


def test_config_must_be_object(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    with pytest.raises(SystemExit) as exc:
        cli.main(["duality", "--config", str(cfg)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["duality", "--config", str(tmp_path / "missing.json")])
    assert exc.value.code == 2


def test_argument_validation_exits_two():
    for argv in (["duality", "--n", "1", "--l", "2"],
                 ["duality", "--n", "2", "--l", "2", "--cutoff", "-1"],
                 ["duality", "--n", "2", "--l", "2", "--threads", "0"],
                 ["duality", "--l", "2"],
                 ["virasoro", "--n", "2", "--l", "2", "--which", "junk"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2


def test_exit_one_on_failing_verdict(monkeypatch, capsys):
    monkeypatch.setattr(
        cli, "cmd_duality",
        lambda *a, **k: ({"command": "duality", "ok": False}, False))
    assert cli.main(["duality", "--n", "2", "--l", "2"]) == 1
    assert json.loads(capsys.readouterr().out)["ok"] is False
