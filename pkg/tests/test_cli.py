import json
import subprocess
import sys

import pytest

from wplab.cli import main
from wplab.coener import CodedSet, Schedule
from wplab.ttwp import m_reduction_word
from wplab.words import format_word


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", *argv)
    return code, json.loads(out)


class TestWord:
    def test_reduce(self, capsys):
        assert run(capsys, "word", "reduce", "a a^-1 b")[:2] == (0, "b\n")
        assert run(capsys, "word", "reduce", "")[:2] == (0, "1\n")

    def test_invert(self, capsys):
        assert run(capsys, "word", "invert", "a b^2")[1] == "b^-2 a^-1\n"

    def test_expsum(self, capsys):
        assert run(capsys, "word", "expsum", "--gen", "v", "v a v^-1")[1] == "0\n"
        assert run(capsys, "word", "expsum", "--gen", "b[3]", "b[3]^4 b")[1] == "4\n"

    def test_syntax_error(self, capsys):
        code, _, err = run(capsys, "word", "reduce", "a ^")
        assert code == 1 and "position 3" in err

    def test_bad_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["word", "frob", "a"])
        assert info.value.code == 1


class TestDecide:
    def test_sigma(self, capsys):
        code, out, _ = run(capsys, "decide", "--mode", "both", "s")
        assert code == 0 and "not identity (rule: sigma-exponent)" in out

    def test_involution(self, capsys):
        code, out, _ = run(capsys, "decide", "b b")
        assert code == 0 and "agreement: true" in out

    def test_json_report(self, capsys):
        code, rep = run_json(capsys, "decide", "--set", "finite", "b t b t")
        assert code == 0
        assert set(rep) == {"schema", "tool", "version", "command", "seed", "bounds",
                            "inputs", "result"}
        assert rep["result"]["verdict"]["rule"] == "R3-special-cell"
        assert rep["result"]["queries"] == [0]
        assert rep["inputs"]["word"].startswith("sha256:")

    def test_m_reduction(self, capsys, tmp_path):
        sched = tmp_path / "s.txt"
        sched.write_text("0 3\n1 5\n")
        cs = CodedSet(Schedule.finite({0: 3, 1: 5}))
        for x in range(8):
            code, rep = run_json(capsys, "decide", "--schedule", str(sched),
                                 format_word(m_reduction_word(x)))
            assert code == 0
            assert rep["result"]["verdict"]["identity"] == cs.contains(x)
            assert rep["result"]["agree"]

    def test_oracle_file(self, capsys, tmp_path):
        o = tmp_path / "o.txt"
        o.write_text("0 1\n")
        code, out, _ = run(capsys, "decide", "--mode", "tt", "--oracle", str(o), "b t b t")
        assert code == 0 and "R3-special-cell" in out

    def test_missing_oracle_answer(self, capsys, tmp_path):
        o = tmp_path / "o.txt"
        o.write_text("5 1\n")
        code, _, err = run(capsys, "decide", "--mode", "tt", "--oracle", str(o), "b t b t")
        assert code == 1 and "[0]" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "decide", "--schedule", "/nonexistent", "b")
        assert code == 1 and "cannot read" in err


class TestVerifyCode:
    def test_agree(self, capsys):
        code, out, _ = run(capsys, "verify-code", "--f", "identity", "3", "3")
        assert code == 0 and "consistent: true" in out

    def test_disagree_with_witnesses(self, capsys):
        code, rep = run_json(capsys, "verify-code", "--f", "identity", "1", "2", "--N", "4")
        assert code == 0
        assert rep["result"]["f_witness"] == 0
        assert rep["result"]["perm_witness"] == {"col": 0, "row": 1}
        assert rep["bounds"]["N"] == 4

    def test_trivial(self, capsys):
        assert run(capsys, "verify-code", "--f", "trivial", "2", "9", "--N", "8")[0] == 0

    def test_inconsistency_exit(self, capsys):
        assert run(capsys, "verify-code", "--f", "mod:2", "1", "3", "--N", "4")[0] == 2

    def test_table(self, capsys, tmp_path):
        t = tmp_path / "t.txt"
        t.write_text("default x\n2 1 1\n")
        code, rep = run_json(capsys, "verify-code", "--f", f"table:{t}", "2", "2")
        assert code == 0 and rep["result"]["f"] == "t"
        t.write_text("2 1 3\n")
        assert run(capsys, "verify-code", "--f", f"table:{t}", "2", "2")[0] == 1

    def test_bad_builtin(self, capsys):
        assert run(capsys, "verify-code", "--f", "nope", "1", "2")[0] == 1


class TestAbelian:
    @pytest.fixture
    def files(self, tmp_path):
        paths = {}
        for name, text in {"x2": "x\nx^2\n", "ab": "a b\na^2\nb^3\n", "c6": "c\nc^6\n",
                           "free": "a\n"}.items():
            paths[name] = tmp_path / f"{name}.txt"
            paths[name].write_text(text)
        return paths

    def test_invariants(self, capsys, files):
        code, rep = run_json(capsys, "abelian", "invariants", str(files["x2"]))
        assert code == 0 and rep["result"] == {"free_rank": 0, "invariant_factors": [2]}

    def test_iso(self, capsys, files):
        code, out, _ = run(capsys, "abelian", "iso", str(files["ab"]), str(files["c6"]))
        assert code == 0 and out == "true\n"
        assert run(capsys, "abelian", "iso", str(files["ab"]))[0] == 1

    def test_diagonal(self, capsys, files):
        code, rep = run_json(capsys, "abelian", "diagonal", str(files["free"]))
        assert code == 0
        assert rep["result"]["invariants"]["free_rank"] == 2
        assert rep["result"]["check"]["passed"]

    def test_bad_presentation(self, capsys, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("a\nb^2\n")
        assert run(capsys, "abelian", "invariants", str(p))[0] == 1


class TestSweep:
    def test_differential(self, capsys, tmp_path):
        code, out, _ = run(capsys, "sweep", "differential", "--count", "60",
                           "--case-file", str(tmp_path / "c.json"))
        assert code == 0 and out == "60/60 agree\n"
        assert not (tmp_path / "c.json").exists()

    def test_mreduction(self, capsys):
        code, out, _ = run(capsys, "sweep", "mreduction", "--xmax", "40")
        assert code == 0 and out == "41/41 match membership\n"

    def test_queryset(self, capsys):
        code, out, _ = run(capsys, "sweep", "queryset", "--count", "50")
        assert code == 0 and out == "query sets static under 50 oracle swaps\n"

    def test_counterexample_dump(self, capsys, tmp_path, monkeypatch):
        import wplab.cli as cli
        monkeypatch.setattr(cli, "brute_force_identity", lambda w, c: True)
        case = tmp_path / "case.json"
        code, _, _ = run(capsys, "sweep", "differential", "--count", "30", "--case-file", str(case))
        assert code == 2
        dumped = json.loads(case.read_text())
        assert dumped["kind"] == "differential" and dumped["replay"][0] == "decide"

    def test_reruns_are_byte_identical(self, capsys, tmp_path):
        outs = []
        for i in range(2):
            path = tmp_path / f"r{i}.json"
            assert main(["sweep", "differential", "--count", "40", "--seed", "5",
                         "--format", "json", "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["seed"] == 5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wplab", "word", "reduce", "b b^-1 a"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "a\n"
