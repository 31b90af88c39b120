import json
import math

import pytest

from specgap import cli
from specgap.cli import EXPERIMENTS, main, run, validate

from _configs import SMALL_CONFIGS


def _run(tmp_path, cfg, threads=1, name="out"):
    out = tmp_path / name
    code = run(json.dumps(cfg), str(out), threads)
    return code, out


def _data_files(out):
    return {p.name: p.read_bytes() for p in sorted(out.iterdir()) if p.name != "metadata.json"}


def test_every_experiment_has_a_config():
    assert set(SMALL_CONFIGS) == set(EXPERIMENTS)


# --- validation ---------------------------------------------------------------------

def test_empty_config_exit_2(tmp_path, capsys):
    code, _ = _run(tmp_path, {})
    assert code == 2
    assert json.loads(capsys.readouterr().err)["errors"]


def test_minimal_config_defaults():
    resolved, errs = validate('{"experiment": "pcf", "phase": {"phi": [0, 1]}, "n": 256}')
    assert errs == []
    assert resolved["window"] == {"kind": "fejer", "c": 0.8}
    assert resolved["ell_max"] == math.ceil(0.8 * 256)
    assert resolved["t"] == 1.0
    sweep, _ = validate({"experiment": "sweep", "phase": {"phi": [0, 0, 1]}, "n": 8})
    assert sweep["seed"] == 0 and sweep["num_samples"] == 200


def test_validate_lists_every_error():
    _, errs = validate({"experiment": "pcf", "phase": {"phi": [0, 1]}, "n": 0,
                        "window": {"kind": "fejer", "c": -1}, "bogus": 1, "seed": 3})
    assert "n must be ≥ 1" in errs
    assert any("window C" in e for e in errs)
    assert any("bogus" in e for e in errs)
    assert any("'seed' is not used" in e for e in errs)
    assert len(errs) == 4


@pytest.mark.parametrize("bad", ["not json", "[]", '{"experiment": "plot"}', '{"experiment": "gauss"}'])
def test_validate_rejects(bad):
    resolved, errs = validate(bad)
    assert resolved is None and errs


@pytest.mark.parametrize("name", sorted(SMALL_CONFIGS))
def test_resolved_config_is_fixed_point(name):
    resolved, errs = validate(SMALL_CONFIGS[name])
    assert errs == []
    again, errs2 = validate(json.dumps(resolved))
    assert errs2 == [] and again == resolved


# --- running -------------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(SMALL_CONFIGS))
def test_threads_do_not_change_outputs(tmp_path, name):
    c1, o1 = _run(tmp_path, SMALL_CONFIGS[name], 1, "a")
    c3, o3 = _run(tmp_path, SMALL_CONFIGS[name], 3, "b")
    assert c1 == c3 == 0
    assert _data_files(o1) == _data_files(o3)
    m1 = json.loads((o1 / "metadata.json").read_text())
    m3 = json.loads((o3 / "metadata.json").read_text())
    m1.pop("wall_time_s"), m3.pop("wall_time_s")
    assert m1 == m3
    assert m1["config"] == validate(SMALL_CONFIGS[name])[0]
    assert m1["files"] == sorted(_data_files(o1))


def test_pcf_picket_fence(tmp_path):
    code, out = _run(tmp_path, {"experiment": "pcf", "phase": {"phi": [0, 1]}, "n": 256, "t": "1/256"})
    assert code == 0
    rec = json.loads((out / "stats.jsonl").read_text())
    assert rec["value"] == pytest.approx(1.0, abs=1e-9)
    assert rec["ell_max"] == 205


def test_gauss_case_table(tmp_path):
    code, out = _run(tmp_path, {"experiment": "gauss", "n_list": list(range(1, 65))})
    assert code == 0
    lines = (out / "gauss.csv").read_text().splitlines()
    assert lines[0] == "ell,N,abs_direct,abs_exact,gcd,N_mod_4"
    assert len(lines) == 1 + sum(range(1, 65))
    for line in lines[1:]:
        ell, n, direct, exact, g, _ = line.split(",")
        ell, n, g = int(ell), int(n), int(g)
        assert g == math.gcd(ell, n)
        m = n // g
        want = math.sqrt(g * n) * (1.0 if m % 2 else (math.sqrt(2) if m % 4 == 0 else 0.0))
        assert float(exact) == pytest.approx(want, abs=1e-9)
        assert float(direct) == pytest.approx(want, abs=1e-9 * n)


def test_precondition_exit_3(tmp_path, capsys):
    code, out = _run(tmp_path, {"experiment": "t_average", "phase": {"phi": [0, 0, 1]}, "n": 8})
    assert code == 3
    assert json.loads(capsys.readouterr().err)["error"] == "precondition"
    assert not out.exists()
    code, _ = _run(tmp_path, {"experiment": "sweep", "phase": {"phi": [0, 1]}, "n": 8})
    assert code == 3


def test_io_failure_exit_4(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run(json.dumps(SMALL_CONFIGS["gauss"]), str(blocker / "sub")) == 4
    assert main(["run", str(tmp_path / "missing.json")]) == 4


def test_main_commands(tmp_path, capsys):
    assert main(["list-experiments"]) == 0
    listed = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    assert listed == list(EXPERIMENTS)
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(SMALL_CONFIGS["dos"]))
    assert main(["validate", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out) == validate(SMALL_CONFIGS["dos"])[0]
    assert main(["run", str(cfg), "--threads", "2", "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "stats.csv").exists()
    assert main(["run", str(cfg), "--threads", "0"]) == 2
    cfg.write_text("{}")
    assert main(["validate", str(cfg)]) == 2


def test_out_path_from_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = dict(SMALL_CONFIGS["quadratic_in"], out_path="here")
    assert run(json.dumps(cfg)) == 0
    rows = (tmp_path / "here" / "quadratic_in.csv").read_text().splitlines()
    assert rows[0] == "N,N_mod_4,I_N"
    assert [r.split(",")[:2] for r in rows[1:]] == [["7", "3"], ["10", "2"], ["12", "0"]]


def test_theorem_a_output_shape(tmp_path):
    code, out = _run(tmp_path, SMALL_CONFIGS["theorem_a"])
    assert code == 0
    js = json.loads((out / "classical.json").read_text())
    assert js["v"] == pytest.approx(math.log(2), abs=1e-12)
    rec = json.loads((out / "stats.jsonl").read_text())
    assert rec["classical_total"] == js["total"]
    assert cli.EXIT_OK == 0
