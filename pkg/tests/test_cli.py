"""CLI subcommands, output formats, and exit codes."""

import json
import math

import pytest

from lpforms import MultilinearForm, save_form
from lpforms.cli import main


@pytest.fixture()
def witness_file(tmp_path):
    path = tmp_path / "witness.json"
    save_form(MultilinearForm(2, 2, [[1, 1], [1, -1]]), path)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExponentsCommand:
    def test_new_isotropic_example(self, capsys):
        code, out, _ = run(capsys, [
            "exponents", "--m", "2", "--p", "4", "--regime", "new-isotropic",
            "--format", "json",
        ])
        assert code == 0
        data = json.loads(out)
        assert data["inner"] == pytest.approx(2.0, abs=1e-12)
        assert data["constant"] == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_ladder_mode(self, capsys):
        code, out, _ = run(capsys, [
            "exponents", "--ladder", "--p", "4,4", "--q", "inf,inf",
            "--lambda0", "4/3", "--format", "json",
        ])
        assert code == 0
        data = json.loads(out)
        assert data["admissible"]
        assert data["eta1"] == pytest.approx(4.0, abs=1e-12)
        assert data["eta2"] == pytest.approx(2.0, abs=1e-12)

    def test_unknown_regime_is_usage_error(self, capsys):
        code, _, _ = run(capsys, [
            "exponents", "--m", "2", "--p", "4", "--regime", "unheard-of",
        ])
        assert code == 2

    def test_hypothesis_violation_names_inequality(self, capsys):
        code, _, err = run(capsys, [
            "exponents", "--m", "2", "--p", "8", "--regime", "new-isotropic",
            "--format", "json",
        ])
        assert code == 2
        assert "1/2 <= sum" in err


class TestBoundsCommand:
    def test_applicable_table(self, capsys):
        code, out, _ = run(capsys, ["bounds", "--m", "2", "--p", "4", "--format", "json"])
        assert code == 0
        rows = json.loads(out)["rows"]
        names = {row["regime"] for row in rows}
        assert names == {"praciano-pereira", "dimant-sevilla-peris", "new-isotropic"}

    def test_csv(self, capsys):
        code, out, _ = run(capsys, ["bounds", "--m", "3", "--p", "4", "--format", "csv"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("regime,m,p,")
        assert len(lines) > 1


class TestNormCommand:
    def test_exact_inf(self, capsys, witness_file):
        code, out, _ = run(capsys, [
            "norm", "--form", witness_file, "--estimator", "exact-inf",
            "--format", "json",
        ])
        assert code == 0
        assert json.loads(out)["estimate"]["value"] == 2.0

    def test_ascent_requires_seed(self, capsys, witness_file):
        code, _, err = run(capsys, [
            "norm", "--form", witness_file, "--p", "4,4", "--format", "json",
        ])
        assert code == 2
        assert "--seed" in err

    def test_generated_form(self, capsys):
        code, out, _ = run(capsys, [
            "norm", "--m", "2", "--n", "3", "--p", "4", "--seed", "5",
            "--format", "json",
        ])
        assert code == 0
        data = json.loads(out)
        assert data["estimate"]["status"] == "heuristic_lower_bound"

    def test_file_xor_generator(self, capsys, witness_file):
        code, _, err = run(capsys, [
            "norm", "--form", witness_file, "--m", "2", "--n", "2",
            "--p", "4", "--seed", "1",
        ])
        assert code == 2
        assert "exactly one" in err


class TestMixedCommand:
    def test_isotropic(self, capsys, witness_file):
        code, out, _ = run(capsys, [
            "mixed", "--form", witness_file, "--rho", "4/3", "--format", "json",
        ])
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(4.0**0.75, rel=1e-12)

    def test_partial(self, capsys, witness_file):
        code, out, _ = run(capsys, [
            "mixed", "--form", witness_file, "--inner", "2", "--outer", "1",
            "--exclude", "1", "--format", "json",
        ])
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(
            2.0 * math.sqrt(2.0), rel=1e-12
        )


class TestRatioCommand:
    def test_witness_littlewood(self, capsys, witness_file):
        code, out, _ = run(capsys, [
            "ratio", "--form", witness_file, "--regime", "bohnenblust-hille",
            "--format", "json",
        ])
        assert code == 0
        data = json.loads(out)
        assert data["ratio"] == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert data["norm"]["status"] == "exact_enumeration"


class TestSweepCommand:
    def test_csv_columns_and_pass(self, capsys):
        code, out, _ = run(capsys, [
            "sweep", "--m", "2", "--n", "2", "--p", "3,4",
            "--regime", "new-isotropic", "--samples", "10",
            "--search-budget", "50", "--seed", "1", "--format", "csv",
        ])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "regime,m,n,p,max_ratio,bound,margin,pass"
        assert len(lines) == 3
        assert all(line.endswith("pass") for line in lines[1:])

    def test_json_bytes_reproducible(self, capsys):
        argv = [
            "sweep", "--m", "2", "--n", "2", "--p", "3",
            "--regime", "new-isotropic", "--samples", "5",
            "--search-budget", "20", "--seed", "2", "--format", "json",
        ]
        _, out1, _ = run(capsys, argv)
        _, out2, _ = run(capsys, argv)
        assert out1 == out2

    def test_inapplicable_cell_is_usage_error(self, capsys):
        code, _, err = run(capsys, [
            "sweep", "--m", "2", "--n", "2", "--p", "8",
            "--regime", "new-isotropic", "--samples", "5",
            "--seed", "1",
        ])
        assert code == 2
        assert "1/2 <= sum" in err


class TestVerifyCommand:
    def test_contraction_suite(self, capsys):
        code, out, _ = run(capsys, [
            "verify", "--suite", "contraction", "--m", "2", "--n", "3",
            "--samples", "20", "--seed", "7", "--format", "json",
        ])
        assert code == 0
        assert json.loads(out)["pass"]

    def test_khinchin_suite(self, capsys):
        code, out, _ = run(capsys, [
            "verify", "--suite", "khinchin", "--m", "2", "--n", "3",
            "--samples", "20", "--seed", "7", "--format", "json",
        ])
        assert code == 0

    def test_degenerate_suite(self, capsys):
        code, out, _ = run(capsys, [
            "verify", "--suite", "degenerate", "--m", "2", "--n", "3",
            "--samples", "10", "--seed", "3", "--format", "json",
        ])
        assert code == 0
        data = json.loads(out)
        assert data["suites"]["degenerate"]["max_ratio"] <= 1.0 + 1e-12

    def test_ladder_suite(self, capsys):
        code, out, _ = run(capsys, [
            "verify", "--suite", "ladder", "--n", "2", "--samples", "10",
            "--seed", "11", "--format", "json",
        ])
        assert code == 0

    def test_seed_required(self, capsys):
        code, _, err = run(capsys, ["verify", "--suite", "contraction"])
        assert code == 2
        assert "--seed" in err
