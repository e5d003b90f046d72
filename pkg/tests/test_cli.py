"""End-to-end runs of the command line front end."""

import json
import subprocess
import sys

import pytest

from rulemat.cli import main
from rulemat.factio import parse_facts, parse_program
from rulemat.training import LOSS_CSV_HEADER


def gen_dataset(tmp_path, name="predecessor"):
    d = tmp_path / name
    assert main(["gen", name, "--out-dir", str(d)]) == 0
    return d


def learn_args(data, out, **extra):
    args = [
        "learn",
        "--facts", str(data / "bk.pl"),
        "--pos", str(data / "pos.pl"),
        "--test-bk", str(data / "test_bk.pl"),
        "--test-pos", str(data / "test_pos.pl"),
        "--test-neg", str(data / "test_neg.pl"),
        "--target", "pre/2",
        "--depth", "0",
        "--epochs", "300",
        "--curriculum-every", "10",
        "--seed", "0",
        "--out-dir", str(out),
    ]
    for flag, value in extra.items():
        args += [f"--{flag.replace('_', '-')}", str(value)]
    return args


class TestGen:
    def test_writes_the_six_dataset_files(self, tmp_path):
        d = gen_dataset(tmp_path)
        for name in ("bk.pl", "pos.pl", "test_bk.pl", "test_pos.pl", "test_neg.pl", "task.json"):
            assert (d / name).is_file()
        bk = parse_facts(d / "bk.pl")
        assert "succ(0,1)" in {str(a) for a in bk.atoms()}

    def test_task_json_records_target_and_hyperparams(self, tmp_path):
        d = gen_dataset(tmp_path)
        meta = json.loads((d / "task.json").read_text())
        assert meta["name"] == "predecessor"
        assert meta["target"] == "pre/2"
        assert meta["depth"] == 0
        assert meta["tau_s"] == 1.0
        assert meta["hp"]["epochs"] == 300

    def test_unknown_task_lists_the_catalog(self, tmp_path, capsys):
        assert main(["gen", "nope", "--out-dir", str(tmp_path)]) == 1
        err = capsys.readouterr().err
        assert "unknown task 'nope'" in err
        assert "predecessor" in err and "lessthan" in err


class TestLearn:
    def test_round_trip_learns_the_flip_rule(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        out = tmp_path / "run"
        assert main(learn_args(data, out)) == 0
        stdout = capsys.readouterr().out
        assert "sound rules after" in stdout
        assert "accuracy: 1.000" in stdout

        program = parse_program(out / "program.pl")
        assert "pre(X,Y) :- succ(Y,X)." in {str(r) for r in program}

        summary = json.loads((out / "summary.json").read_text())
        assert summary["task"] == "pre/2"
        assert summary["accuracy"] == 1.0
        assert summary["sound_rules"] >= 1
        assert summary["C"] > 0 and summary["S_size"] > 0

        header = (out / "loss.csv").read_text().splitlines()[0]
        assert header == ",".join(LOSS_CSV_HEADER)

    def test_same_seed_rewrites_identical_bytes(self, tmp_path):
        data = gen_dataset(tmp_path)
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(learn_args(data, first, epochs=80)) == 0
        assert main(learn_args(data, second, epochs=80)) == 0
        for name in ("program.pl", "loss.csv", "summary.json"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_theta_needs_six_weights(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        args = learn_args(data, tmp_path / "run", theta="1,1,1")
        assert main(args) == 1
        assert "--theta needs 6 weights" in capsys.readouterr().err

    def test_missing_fact_file_names_the_path(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        args = learn_args(data, tmp_path / "run")
        args[args.index("--facts") + 1] = str(tmp_path / "absent.pl")
        assert main(args) == 1
        assert f"no such file: {tmp_path / 'absent.pl'}" in capsys.readouterr().err

    def test_oversized_substitution_space_fails_cleanly(self, tmp_path, capsys):
        # 19^2 head assignments times 20^5 existential ones tops the cap
        bk = "".join(f"succ({i},{i + 1}).\n" for i in range(19))
        pos = "".join(f"pre({i + 1},{i}).\n" for i in range(19))
        (tmp_path / "bk.pl").write_text(bk)
        (tmp_path / "pos.pl").write_text(pos)
        code = main([
            "learn",
            "--facts", str(tmp_path / "bk.pl"),
            "--pos", str(tmp_path / "pos.pl"),
            "--target", "pre/2",
            "--depth", "5",
            "--out-dir", str(tmp_path / "run"),
        ])
        assert code == 1
        assert "substitution space" in capsys.readouterr().err


class TestEval:
    @pytest.fixture()
    def trained(self, tmp_path):
        data = gen_dataset(tmp_path)
        out = tmp_path / "run"
        assert main(learn_args(data, out)) == 0
        return data, out

    def eval_args(self, data, out, program):
        return [
            "eval",
            "--program", str(program),
            "--facts", str(data / "bk.pl"),
            "--pos", str(data / "pos.pl"),
            "--test-bk", str(data / "test_bk.pl"),
            "--test-pos", str(data / "test_pos.pl"),
            "--test-neg", str(data / "test_neg.pl"),
            "--target", "pre/2",
            "--out-dir", str(out),
        ]

    def test_scores_a_stored_program(self, trained, tmp_path, capsys):
        data, run = trained
        out = tmp_path / "ev"
        assert main(self.eval_args(data, out, run / "program.pl")) == 0
        stdout = capsys.readouterr().out
        assert "accuracy: 1.000" in stdout
        assert "test negatives derived: 0/10" in stdout
        assert "MRR:" in stdout

        rows = (out / "metrics.csv").read_text().splitlines()
        assert rows[0] == "accuracy,mrr,hits1,hits3,hits10"
        assert rows[1].startswith("1,")

    def test_requires_held_out_positives(self, trained, tmp_path, capsys):
        data, run = trained
        args = self.eval_args(data, tmp_path / "ev", run / "program.pl")
        i = args.index("--test-pos")
        del args[i:i + 2]
        assert main(args) == 1
        assert "eval needs held-out positives" in capsys.readouterr().err


class TestNoise:
    def noise_args(self, data, out, **extra):
        args = [
            "noise",
            "--facts", str(data / "bk.pl"),
            "--pos", str(data / "pos.pl"),
            "--target", "pre/2",
            "--out-dir", str(out),
        ]
        for flag, value in extra.items():
            args += [f"--{flag}", str(value)]
        return args

    def test_sigma_writes_weighted_facts_and_negatives(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        out = tmp_path / "noised"
        assert main(self.noise_args(data, out, sigma=1.0, seed=3)) == 0
        assert "sigma=1.0 seed=3" in capsys.readouterr().out

        bk = parse_facts(out / "bk.pl")
        weights = [bk.weight(a) for a in bk.support_atoms()]
        assert any(w != 1.0 for w in weights)
        assert all(0.0 <= w <= 1.0 for w in weights)
        assert (out / "neg.pl").is_file()

    def test_mu_flips_labels_without_negatives(self, tmp_path):
        data = gen_dataset(tmp_path)
        out = tmp_path / "flipped"
        assert main(self.noise_args(data, out, mu=1.0, seed=0)) == 0
        assert not (out / "neg.pl").exists()

        original = {str(a) for a in parse_facts(data / "pos.pl").atoms()}
        flipped = {str(a) for a in parse_facts(out / "pos.pl").atoms()}
        assert flipped and not flipped & original

    def test_flipped_files_feed_back_into_learn(self, tmp_path):
        data = gen_dataset(tmp_path)
        noised = tmp_path / "flipped"
        assert main(self.noise_args(data, noised, mu=1.0, seed=0)) == 0
        out = tmp_path / "run"
        code = main([
            "learn",
            "--facts", str(noised / "bk.pl"),
            "--pos", str(noised / "pos.pl"),
            "--target", "pre/2",
            "--epochs", "300",
            "--curriculum-every", "10",
            "--out-dir", str(out),
        ])
        assert code == 0
        # the inverted relation contains succ itself
        assert "pre(X,Y) :- succ(X,Y)." in {str(r) for r in parse_program(out / "program.pl")}

    def test_sigma_and_mu_are_mutually_exclusive(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        args = self.noise_args(data, tmp_path / "out", sigma=1.0, mu=0.5)
        assert main(args) == 1
        assert "exactly one of --sigma or --mu" in capsys.readouterr().err


def test_console_entry_point_prints_usage():
    proc = subprocess.run(
        [sys.executable, "-m", "rulemat.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "learn" in proc.stdout and "noise" in proc.stdout
