import json

import pytest
from click.testing import CliRunner

from anyonbraid.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, name, **cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_lattice_validate(runner, tmp_path):
    res = runner.invoke(main, ["lattice", "validate", "six"])
    assert res.exit_code == 0
    assert json.loads(res.output)["rank"] == 6
    res = runner.invoke(main, ["lattice", "validate", "square:3x3:torus"])
    assert res.exit_code == 0 and json.loads(res.output)["logical_qubits"] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert runner.invoke(main, ["lattice", "validate", str(bad)]).exit_code == 2
    odd = write_config(tmp_path, "odd.json", n_edges=3, vertices=[[1, 2]], faces=[[2, 3]])
    res = runner.invoke(main, ["lattice", "validate", odd])
    assert res.exit_code == 1 and json.loads(res.output)["commuting"] is False


def test_lattice_synth(runner, tmp_path):
    res = runner.invoke(main, ["lattice", "synth", "six"])
    assert res.exit_code == 0 and res.output.startswith("QUBITS 6\n")
    out = tmp_path / "c.txt"
    assert runner.invoke(main, ["lattice", "synth", "nine", "-o", str(out)]).exit_code == 0
    assert "CNOT" in out.read_text()
    assert runner.invoke(main, ["lattice", "synth", "square:3x3:torus"]).exit_code == 2


def test_run_braided_and_trivial(runner, tmp_path):
    six = write_config(tmp_path, "six.json", code="six", e_edge=3, m_edge=4, loop=[6, 5, 3, 4],
                     engine="tableau", seed=0)
    res = runner.invoke(main, ["run", six])
    assert res.exit_code == 0 and json.loads(res.output)["braiding_phase"] == -1
    nine = write_config(tmp_path, "nine.json", code="nine", e_edge=3, m_edge=4, loop=[9, 8, 6, 7],
                      engine="both", seed=0)
    report = json.loads(runner.invoke(main, ["run", nine]).output)
    assert report["braiding_phase"] == 1 and report["agreement"] is True


def test_run_open_loop_is_protocol_misuse(runner, tmp_path):
    cfg_path = write_config(tmp_path, "open.json", code="six", e_edge=3, m_edge=4, loop=[6, 5],
                      engine="tableau", seed=0)
    res = runner.invoke(main, ["run", cfg_path])
    assert res.exit_code == 3
    assert "unclosed loop" in res.output


def test_run_input_errors(runner, tmp_path):
    missing = write_config(tmp_path, "m.json", code="six", m_edge=4, loop=[6, 5, 3, 4])
    assert runner.invoke(main, ["run", missing]).exit_code == 2
    big = write_config(tmp_path, "big.json", code="square:5x5:planar", e_edge=1, m_edge=1, loop=[1, 2],
                     engine="statevector")
    res = runner.invoke(main, ["run", big])
    assert res.exit_code == 2 and "cap" in res.output
    unknown = write_config(tmp_path, "u.json", code="hexagon", e_edge=1, m_edge=1, loop=[])
    assert runner.invoke(main, ["run", unknown]).exit_code == 2


def test_run_is_byte_identical_and_traced(runner, tmp_path):
    cfg_path = write_config(tmp_path, "six.json", code="six", e_edge=3, m_edge=4, loop=[6, 5, 3, 4],
                      engine="both", seed=5)
    a = runner.invoke(main, ["run", cfg_path, "--trace"]).output
    b = runner.invoke(main, ["run", cfg_path, "--trace"]).output
    assert a == b
    assert "syndrome" in json.loads(a)["steps"][0]
    out = tmp_path / "r.json"
    runner.invoke(main, ["run", cfg_path, "--trace", "-o", str(out)])
    assert out.read_text() == a


def test_run_seed_random_is_echoed(runner, tmp_path):
    cfg_path = write_config(tmp_path, "six.json", code="six", e_edge=3, m_edge=4, loop=[6, 5, 3, 4])
    report = json.loads(runner.invoke(main, ["run", cfg_path, "--seed", "random"]).output)
    assert isinstance(report["seed"], int)
    assert runner.invoke(main, ["run", cfg_path, "--seed", "abc"]).exit_code == 2


def test_run_lattice_file_and_self_statistics(runner, tmp_path):
    (tmp_path / "code.json").write_text(json.dumps(
        {"n_edges": 6, "vertices": [[1, 2, 3], [3, 4, 5, 6]], "faces": [[1, 3, 4], [2, 3, 5], [4, 6], [5, 6]]}))
    cfg_path = write_config(tmp_path, "self.json", code="code.json", experiment="self_statistics", species="e",
                      pair_edge=3, loop=[4, 6])
    res = runner.invoke(main, ["run", cfg_path])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["braiding_phase"] == 1


def test_bench(runner):
    res = runner.invoke(main, ["bench", "--size", "10"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["n_qubits"] == 200 and all(v > 0 for v in data["seconds"].values())
    assert runner.invoke(main, ["bench", "--size", "0"]).exit_code == 2


def test_verify_subset(runner):
    res = runner.invoke(main, ["verify", "--filter", "primary", "--only", "1,2,9"])
    assert res.exit_code == 0, res.output
    assert res.output.count("[PASS]") == 3
    assert runner.invoke(main, ["verify", "--filter", "secondary"]).exit_code == 2


def test_verify_fails_on_injected_sign_bug(runner, monkeypatch):
    from anyonbraid.stabilizer import Tableau

    def x_without_sign(self, q):
        return self

    monkeypatch.setattr(Tableau, "x", x_without_sign)
    monkeypatch.setitem(Tableau._DISPATCH, "X", x_without_sign)
    res = runner.invoke(main, ["verify", "--only", "1,2"])
    assert res.exit_code == 1
    assert "failing: 1, 2" in res.output
