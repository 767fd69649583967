import json
import os

import pytest

from dsmin.cli import EXIT_CAP, EXIT_OK, EXIT_USAGE, fmt, load_function, main

HERE = os.path.dirname(__file__)
F1 = os.path.join(HERE, "fixtures", "fix_f1.json")
G1 = os.path.join(HERE, "fixtures", "fix_g1.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse(out):
    items = {}
    for line in out.splitlines():
        for tok in line.split():
            k, _, v = tok.partition("=")
            items[k] = v
    return items


class TestMinimize:
    def test_fixture(self, capsys):
        code, out, _ = run(capsys, "minimize", "--f", F1, "--g", G1, "--alg", "modmod")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "set={} value=0 cert=LocalMin"

    @pytest.mark.parametrize("alg", ["subsup", "supsub"])
    def test_other_algorithms(self, capsys, alg):
        code, out, _ = run(capsys, "minimize", "--f", F1, "--g", G1, "--alg", alg)
        assert code == EXIT_OK
        assert parse(out)["cert"] == "LocalMin"

    def test_epsilon_within_bound(self, capsys):
        code, out, _ = run(
            capsys, "minimize", "--f", "random:n=9,seed=3", "--g", "random:n=9,seed=4",
            "--alg", "subsup", "--epsilon", "0.1",
        )
        items = parse(out)
        assert code == EXIT_OK
        if "iteration_bound" in items:
            assert int(items["steps_after_first"]) <= int(items["iteration_bound"])

    def test_iteration_cap_exit(self, capsys):
        code, out, _ = run(
            capsys, "minimize", "--f", "random:n=10,seed=3", "--g", "random:n=10,seed=4", "--max-iterations", "1"
        )
        assert code in (EXIT_OK, EXIT_CAP)
        assert (code == EXIT_CAP) == (parse(out)["cert"] == "IterationCap")

    def test_trace_file(self, capsys, tmp_path):
        path = tmp_path / "trace.json"
        run(capsys, "minimize", "--f", F1, "--g", G1, "--trace", str(path))
        assert json.loads(path.read_text())["certificate"] == "LocalMin"

    def test_constraint(self, capsys):
        code, out, _ = run(
            capsys, "minimize", "--f", "cardinality:n=4", "--g", "modular:weights=1;-1;0;2", "--constraint", "eq:2"
        )
        assert code == EXIT_OK
        assert parse(out)["set"].count(",") == 1

    def test_constraint_needs_modmod(self, capsys):
        code, _, err = run(capsys, "minimize", "--f", F1, "--g", G1, "--alg", "subsup", "--constraint", "eq:1")
        assert code == EXIT_USAGE
        assert "usage" in err

    def test_restarts(self, capsys):
        code, out, _ = run(
            capsys, "minimize", "--f", "random:n=8,seed=1", "--g", "random:n=8,seed=2",
            "--strategy", "random", "--restarts", "3", "--jobs", "2",
        )
        assert code == EXIT_OK

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "minimize", "--f", "missing.json")
        assert code == EXIT_USAGE
        assert "missing.json" in err

    def test_bad_flag(self, capsys):
        assert run(capsys, "minimize", "--alg", "nope")[0] == EXIT_USAGE

    def test_mismatched_sizes(self, capsys):
        assert run(capsys, "minimize", "--f", F1, "--g", "zero:n=3")[0] == EXIT_USAGE


class TestBounds:
    def test_fixture(self, capsys):
        code, out, _ = run(capsys, "bounds", "--f", F1, "--g", G1)
        items = parse(out)
        assert code == EXIT_OK
        assert (items["lower_bound_1"], items["lower_bound_2"], items["brute_force"]) == ("-0.5", "-0.5", "0")

    def test_modular_all_equal(self, capsys):
        _, out, _ = run(capsys, "bounds", "--f", "modular:weights=1;-1;2", "--g", "modular:weights=0;1;3")
        items = parse(out)
        assert items["lower_bound_1"] == items["lower_bound_2"] == items["brute_force"] == "-3"

    def test_large_n_omits_brute_force(self, capsys):
        _, out, _ = run(capsys, "bounds", "--f", "random_coverage:n=22,seed=1")
        assert "brute_force" not in parse(out)


class TestDecompose:
    def test_fixture(self, capsys, tmp_path):
        path = tmp_path / "mono.json"
        code, out, _ = run(capsys, "decompose", "--f", F1, "--g", G1, "--out", str(path))
        items = parse(out)
        assert code == EXIT_OK
        assert items["k_f"] == "1.5;0.5"
        data = json.loads(path.read_text())
        assert data["f"]["values"]["1"] == 1.5


class TestFeatsel:
    def test_csv_and_determinism(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"dataset": "mushroom", "algorithms": ["ModMod"], "lambdas": [0.01, 0.05]}))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, "featsel", "--config", str(cfg), "--out", str(a), "--seed", "2")[0] == EXIT_OK
        assert run(capsys, "featsel", "--config", str(cfg), "--out", str(b), "--seed", "2")[0] == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 3

    @pytest.mark.parametrize("text", ["{", '{"algorithms": []}', '{"dataset": "mushroom", "algorithms": ["X"]}'])
    def test_bad_config(self, capsys, tmp_path, text):
        cfg = tmp_path / "bad.json"
        cfg.write_text(text)
        assert run(capsys, "featsel", "--config", str(cfg))[0] == EXIT_USAGE

    def test_missing_config(self, capsys):
        assert run(capsys, "featsel", "--config", "nope.json")[0] == EXIT_USAGE


class TestSelftest:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "selftest", "--count", "5")
        assert code == EXIT_OK
        assert out.count("status=pass") == len(out.splitlines())


class TestHelpers:
    def test_fmt(self):
        assert fmt(-0.0) == "0"
        assert fmt(-0.5) == "-0.5"
        assert fmt(1e-20) == "1e-20"

    def test_generator_specs(self):
        assert load_function("zero:n=3").n == 3
        assert load_function("modular:weights=2")(1) == 2.0
        assert load_function("cardinality:n=4,phi=log1p").n == 4
