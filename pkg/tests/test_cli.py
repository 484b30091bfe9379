import json

import pytest

from phaselab import lemmas
from phaselab.cli import EXIT_CAP, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from phaselab.words import count_up_to_length


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def wordfile(tmp_path):
    def make(*lines):
        p = tmp_path / "words.txt"
        p.write_text("\n".join(lines) + "\n")
        return str(p)

    return make


class TestTranscode:
    def test_ranks_preserved(self, capsys, wordfile):
        code, out, _ = run(capsys, "transcode", "--k", "3", "--in", wordfile("-", "1", "12", "3"))
        assert code == EXIT_OK
        assert out.split() == ["-", "1", "31", "3"]

    def test_bad_symbol(self, capsys, wordfile):
        code, _, err = run(capsys, "transcode", "--k", "3", "--in", wordfile("14"))
        assert code == EXIT_USAGE and "line 1" in err


class TestHeuristicAndConjugate:
    def test_heuristic_window(self, capsys):
        code, out, _ = run(capsys, "heuristic", "--lang", "omega-parity@k=2", "--max-length", "2")
        assert code == EXIT_OK
        rows = dict(line.split() for line in out.splitlines())
        assert rows["-"] == "_" and rows["1"] == "A" and rows["2"] == "R" and rows["11"] == "_"

    def test_conjugate_membership(self, capsys, wordfile):
        code, out, _ = run(capsys, "conjugate", "--lang", "first-symbol@k=3", "--in", wordfile("1", "2"))
        assert code == EXIT_OK
        assert out.split() == ["1", "A", "2", "R"]


class TestCurve:
    def test_csv_and_summary(self, capsys):
        code, out, err = run(capsys, "curve", "--lang", "signed-length-demo@k=3", "--max-length", "5")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "value,total,accepted,undecided,fraction"
        row2 = next(line for line in lines if line.startswith("2,"))
        total = int(row2.split(",")[1])
        assert row2 == f"2,{total},{total},0,1/1"
        assert "cond1:" in err and "threshold: 1/2" in err

    def test_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert main(["curve", "--lang", "kernel-majority@k=3", "--max-rank", "500", "--out", str(p)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("lang = first-symbol@k=3\nmax_rank = 40\n")
        code, out, _ = run(capsys, "curve", "--config", str(cfg))
        assert code == EXIT_OK and out.startswith("value,")

    def test_negative_rank(self, capsys):
        code, _, _ = run(capsys, "curve", "--lang", "first-symbol@k=3", "--max-rank", "-1")
        assert code == EXIT_USAGE

    def test_unknown_language(self, capsys):
        assert run(capsys, "curve", "--lang", "nope@k=3", "--max-rank", "5")[0] == EXIT_USAGE

    def test_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("PHASELAB_CAP", "100")
        code, _, err = run(capsys, "curve", "--lang", "first-symbol@k=3", "--max-rank", "5000")
        assert code == EXIT_CAP and err


class TestAudit:
    def test_document(self, capsys):
        code, out, _ = run(capsys, "audit", "--lang", "first-symbol@k=3", "--n-max", "3", "--sparsity-max", "6")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert {"naeu", "adequacy", "chi", "sparsity"} <= set(doc)
        assert doc["chi"][0]["chi_low"] == 0 and doc["chi"][0]["chi_upp"] == 0

    def test_even_alphabet_adequacy(self, capsys):
        code, out, _ = run(capsys, "audit", "--lang", "omega-parity@k=2", "--n-max", "2")
        assert code == EXIT_OK
        assert json.loads(out)["adequacy"]["verdict"] == "NOT-APPLICABLE"

    def test_bad_poly(self, capsys):
        assert run(capsys, "audit", "--lang", "first-symbol@k=3", "--poly", "2^n")[0] == EXIT_USAGE


class TestVerify:
    def test_default_scenario(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == EXIT_OK
        assert json.loads(out)["overall_confidence"] == "1/1"

    def test_reproducible(self, capsys, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("flip_probability = 1/4\nseed = 7\ncohort_size = 10\n")
        first = run(capsys, "verify", "--config", str(cfg))[1]
        second = run(capsys, "verify", "--config", str(cfg))[1]
        assert first == second

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("colour = blue\n")
        assert run(capsys, "verify", "--config", str(cfg))[0] == EXIT_USAGE


class TestLemmaSuite:
    def test_all_pass(self, capsys):
        code, out, _ = run(capsys, "lemma-suite")
        assert code == EXIT_OK
        assert out.splitlines()[-1] == "16/16 checks passed"

    def test_only(self, capsys):
        code, out, _ = run(capsys, "lemma-suite", "--only", "codec", "xi")
        assert code == EXIT_OK and "2/2" in out

    def test_failure_exit(self, capsys, monkeypatch):
        broken = lemmas.Check("broken", "1 = 2", lambda scale: (False, "nope"))
        monkeypatch.setattr(lemmas, "CHECKS", lemmas.CHECKS + (broken,))
        code, _, err = run(capsys, "lemma-suite", "--only", "broken")
        assert code == EXIT_FAILED and "1 = 2" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "transcode")[0] == EXIT_USAGE


def test_window_size_helper():
    assert count_up_to_length(3, 4) - 1 == 120
