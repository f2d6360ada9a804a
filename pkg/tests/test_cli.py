import io
import json
import subprocess
import sys

import pytest

from bipdense.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_VIOLATION, main
from _graphs import C4, C4_K3, K3


def run(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in (("c4", C4), ("k3", K3), ("mix", C4_K3)):
        paths[name] = tmp_path / f"{name}.el"
        paths[name].write_text(text)
    return paths


def test_bratio(files):
    code, out, _ = run(["bratio", "--graph", str(files["c4"]), "--left", "a,c", "--right", "b,d"])
    assert code == EXIT_OK
    assert json.loads(out)["beta"] == 0


def test_oracle_beta(files):
    code, out, _ = run(["oracle", "beta", "--graph", str(files["k3"])])
    assert code == EXIT_OK
    assert json.loads(out)["beta"] == pytest.approx(1 / 3)


def test_oracle_other_modes(files):
    _, out, _ = run(["oracle", "set", "--graph", str(files["k3"]), "--set", "a,b"])
    assert json.loads(out)["beta"] == 0.5
    _, out, _ = run(["oracle", "profile", "--graph", str(files["c4"]), "--k", "4"])
    assert json.loads(out)["beta"] == 0.5
    _, out, _ = run(["oracle", "spectrum", "--graph", str(files["c4"])])
    assert json.loads(out)["eigenvalues"] == pytest.approx([0, 1, 1, 2], abs=1e-12)
    assert run(["oracle", "set", "--graph", str(files["k3"])])[0] == EXIT_INVALID


def test_locdb_result_shape(files):
    argv = ["locdb", "--graph", str(files["mix"]), "--seed", "a", "--k", "2000", "--theta", "0.05", "--eps", "0.4", "--constants", "relaxed"]
    code, out, err = run(argv)
    assert code == EXIT_OK and err == ""
    d = json.loads(out)
    assert d["best"]["beta"] == 0.0
    assert d["found_at"]["seed"] == "a"
    assert d["params"]["constants"] == "relaxed"
    assert d["work"]["edges_touched"] > 0
    assert run(argv)[1] == out


def test_relaxed_default_prints_note(files):
    code, _, err = run(["swpdb", "--graph", str(files["c4"]), "--k", "8", "--theta", "0.1", "--eps", "0.4"])
    assert code == EXIT_OK
    assert "2560000" in err and "relaxed" in err


def test_swpdb_threads_and_csv(files):
    base = ["swpdb", "--graph", str(files["mix"]), "--k", "8", "--theta", "0.1", "--eps", "0.4", "--constants", "relaxed"]
    one = run(base)[1]
    assert run(base + ["--threads", "3"])[1] == one
    code, out, _ = run(base + ["--csv"])
    assert code == EXIT_OK and out.splitlines()[0] == "t,best_beta"
    assert run(base + ["--threads", "0"])[0] == EXIT_INVALID


def test_theta_grid_flag(files):
    code, out, _ = run(["locdb", "--graph", str(files["c4"]), "--seed", "b", "--k", "8", "--eps", "0.4", "--constants", "relaxed", "--theta-grid"])
    assert code == EXIT_OK
    assert json.loads(out)["theta_grid"][0] == 0.25


def test_eigsweep_and_profile_from_stdin():
    code, out, _ = run(["eigsweep", "--graph", "-"], stdin_text=C4)
    assert code == EXIT_OK and json.loads(out)["best"]["beta"] == 0.0
    code, out, _ = run(["profile", "--graph", "-", "--k", "2", "--eta", "0.1", "--eps", "0.5"], stdin_text=C4 + "e f\nf g\ng h\nh e\n")
    assert code == EXIT_OK and json.loads(out)["hypothesis_holds"] is True


def test_check_all_passes_and_is_deterministic(files):
    code, out, _ = run(["check", "all", "--graph", str(files["mix"])])
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["ok"] is True
    assert {c["name"] for c in d["checks"]} == {
        "convergence_lemma", "truncation_proposition", "trace_identity", "psi_identities", "upper_bound_audit",
    }
    assert run(["check", "all", "--graph", str(files["mix"])])[1] == out


def test_check_reports_violations_with_exit_code(files, monkeypatch):
    import bipdense.potential as pot

    real = pot.check_convergence_lemma

    def broken(p, **kw):
        rep = real(p, **kw)
        rep.record(1.0, 0.0, 0.0, injected=True)
        return rep

    monkeypatch.setattr(pot, "check_convergence_lemma", broken)
    code, out, _ = run(["check", "convergence", "--graph", str(files["k3"])])
    assert code == EXIT_VIOLATION
    assert json.loads(out)["ok"] is False


def test_gen_writes_instance(tmp_path):
    prefix = tmp_path / "inst"
    argv = ["gen", "--n-background", "50", "--k-left", "3", "--k-right", "3", "--background-p", "0.1", "--n-attach", "2", "--rng-seed", "4", "--prefix", str(prefix)]
    code, out, _ = run(argv)
    assert code == EXIT_OK
    assert json.loads(out)["planted_left"] == ["L0", "L1", "L2"]
    assert (tmp_path / "inst.el").exists() and (tmp_path / "inst.json").exists()
    assert run(argv)[1] == out


def test_output_file(files, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(["oracle", "beta", "--graph", str(files["k3"]), "--out", str(target)])
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["beta"] == pytest.approx(1 / 3)


@pytest.mark.parametrize(
    "argv",
    [
        ["bratio", "--graph", "missing.el", "--left", "a"],
        ["bratio", "--graph", "-", "--left", "a", "--bogus"],
        ["frobnicate"],
        ["locdb", "--graph", "-", "--seed", "a", "--k", "10", "--eps", "0.4"],
        ["locdb", "--graph", "-", "--seed", "zz", "--k", "10", "--theta", "0.1", "--eps", "0.4"],
        ["swpdb", "--graph", "-", "--k", "10", "--theta", "0.3", "--eps", "0.4", "--constants", "paper"],
        ["bratio", "--graph", "-", "--left", "a", "--right", "a"],
    ],
)
def test_validation_errors_exit_one(argv):
    code, out, err = run(argv, stdin_text=C4)
    assert code == EXIT_INVALID
    assert out == "" and "error:" in err


def test_flags_are_validated_before_loading(tmp_path):
    bad = tmp_path / "bad.el"
    bad.write_text("a\n")
    code, _, err = run(["swpdb", "--graph", str(bad), "--k", "10", "--theta", "0.3", "--eps", "0.4", "--constants", "paper"])
    assert code == EXIT_INVALID and "paper constants" in err


def test_malformed_graph_exit_one():
    code, _, err = run(["eigsweep", "--graph", "-"], stdin_text="a b\nc\n")
    assert code == EXIT_INVALID and "line 2" in err


def test_budget_error_exit_two():
    text = "".join(f"{i} {j}\n" for i in range(16) for j in range(i + 1, 16) if (i + j) % 3)
    code, _, err = run(["oracle", "beta", "--graph", "-"], stdin_text=text)
    assert code == EXIT_BUDGET and "budget" in err


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "bipdense", "oracle", "beta", "--graph", str(files["k3"])],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["beta"] == pytest.approx(1 / 3)
