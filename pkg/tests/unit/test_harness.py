"""Unit tests for the command-line harness."""

import json

import numpy as np
import pytest

from evals.harness import COMMANDS, build_parser, config_from_args, main, run
from evals.schemas.config import Command, ExperimentConfig


def _load(path) -> dict:
    return json.loads(path.read_text())


@pytest.mark.unit
class TestParser:
    """Tests for flag parsing."""

    def test_every_command_is_registered(self):
        assert set(COMMANDS) == set(Command)

    def test_omitted_flags_fall_back_to_config_defaults(self):
        args = build_parser().parse_args(["plunnecke-scan", "--p", "3"])
        config = config_from_args(args)
        assert config.p == 3
        assert config.n == 3
        assert config.kmax == 4

    def test_lists_and_switches(self):
        args = build_parser().parse_args(
            ["brz-verify", "--thresholds", "0.9", "0.95", "--quasi-pfr", "--instance-kind", "cosets"]
        )
        config = config_from_args(args)
        assert config.thresholds == [0.9, 0.95]
        assert config.quasi_pfr is True
        assert config.freiman is False
        assert config.instance_kind == "cosets"

    def test_harness_flags_are_not_config(self):
        args = build_parser().parse_args(["lintest", "--verbose", "--no-progress"])
        assert isinstance(config_from_args(args), ExperimentConfig)


@pytest.mark.unit
class TestMain:
    """Tests for exit codes and written reports."""

    def test_nmc_distance_identity(self, tmp_path):
        out = tmp_path / "identity.json"
        code = main(["nmc-distance", "--p", "2", "--n", "1", "--family", "identity", "--no-progress", "-o", str(out)])
        assert code == 0
        report = _load(out)
        assert report["schema_version"] == "additive-lab/1"
        assert report["config"]["family"] == "identity"
        assert report["records"][0]["distance"] == {"kind": "exact", "value": "1/4", "tolerance": None}

    def test_lintest_without_corruption(self, tmp_path):
        out = tmp_path / "lintest.json"
        code = main(["lintest", "--p", "2", "--n", "2", "--corrupt", "0", "--trials", "5", "--no-progress", "-o", str(out)])
        assert code == 0
        report = _load(out)
        assert len(report["records"]) == 5
        assert all(r["accept_prob"]["value"] == 1 for r in report["records"])
        assert all(r["agreement"]["value"] == 1 for r in report["records"])
        assert report["summary"]["random_table_accept"]["value"] == "1/4"

    def test_lintest_function_file(self, tmp_path):
        from src.lintest import affine
        from src.fpn import GroupCtx
        from src.storage.files import save_fn

        ctx = GroupCtx(3, 2)
        fn_file = tmp_path / "f.txt"
        save_fn(fn_file, affine(ctx, [[1, 0], [0, 1]], [1, 1]))
        out = tmp_path / "f.json"
        code = main(["lintest", "--p", "3", "--n", "2", "--fn-file", str(fn_file), "--no-progress", "-o", str(out)])
        assert code == 0
        record = _load(out)["records"][0]
        assert record["accept_prob"]["value"] == 0
        assert record["affine"]["agreement"]["value"] == 1

    def test_csv_output(self, tmp_path):
        out = tmp_path / "evasive.csv"
        code = main(["evasive-search", "--p", "7", "--alphabet-size", "3", "--format", "csv", "--no-progress", "-o", str(out)])
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header.startswith("instance,mode,alphabet,profile")

    def test_invalid_config_is_usage_error(self, capsys):
        assert main(["plunnecke-scan", "--p", "4"]) == 2
        assert "invalid configuration" in capsys.readouterr().err

    def test_unknown_flag_is_usage_error(self):
        assert main(["plunnecke-scan", "--colour", "blue"]) == 2

    def test_missing_command_is_usage_error(self):
        assert main([]) == 2

    def test_list(self, capsys):
        assert main(["--list"]) == 0
        assert "brz-verify" in capsys.readouterr().out

    def test_missing_set_file_fails_with_report(self, tmp_path):
        out = tmp_path / "failed.json"
        code = main(
            [
                "plunnecke-scan",
                "--instance-kind",
                "file",
                "--set-file",
                str(tmp_path / "missing.txt"),
                "--no-progress",
                "-o",
                str(out),
            ]
        )
        assert code == 1
        report = _load(out)
        assert report["success"] is False
        assert report["errors"][0]["instance"] is None
        assert report["errors"][0]["error_type"] == "FileNotFoundError"

    def test_budget_failure(self, tmp_path):
        out = tmp_path / "budget.json"
        code = main(["subgroup-scan", "--p", "2", "--n", "3", "--budget", "100", "--no-progress", "-o", str(out)])
        assert code == 1
        assert _load(out)["errors"][0]["error_type"] == "BudgetExceededError"

    def test_oversized_lifted_dimension_is_usage_error(self, capsys):
        argv = ["nmc-sweep", "--p", "13", "--n", "1", "--family", "lifted", "--n-values", "1", "2", "7"]
        assert main(argv) == 2
        assert "invalid configuration" in capsys.readouterr().err

    def test_quasi_pfr_with_freiman_is_usage_error(self):
        assert main(["brz-verify", "--quasi-pfr", "--freiman", "--no-progress"]) == 2

    def test_budget_reaches_linear_agreement(self, tmp_path):
        """2^9 matrices over F_2^3 exceed a budget of 100, so auto mode samples."""
        from src.fpn import GroupCtx
        from src.lintest import linear
        from src.storage.files import save_fn

        fn_file = tmp_path / "id.txt"
        save_fn(fn_file, linear(GroupCtx(2, 3), np.eye(3, dtype=np.int64)))
        out = tmp_path / "sampled.json"
        code = main(
            [
                "lintest",
                "--n",
                "3",
                "--fn-file",
                str(fn_file),
                "--budget",
                "100",
                "--samples",
                "20",
                "--no-progress",
                "-o",
                str(out),
            ]
        )
        assert code == 0
        record = _load(out)["records"][0]
        assert record["linear"]["mode"] == "sampling"
        assert "affine" not in record
        assert record["linear"]["agreement"]["value"] == 1

    def test_report_to_stdout(self, capsys):
        assert main(["evasive-search", "--p", "5", "--no-progress"]) == 0
        captured = capsys.readouterr()
        assert json.loads(captured.out)["command"] == "evasive-search"
        assert "=" * 60 in captured.err


@pytest.mark.unit
class TestRun:
    """Tests for run() without the command line."""

    def test_subgroup_scan(self):
        report = run(ExperimentConfig(command="subgroup-scan", p=2, n=2))
        assert len(report.records) == 15
        assert report.summary["exceptions"]["value"] == 0
        # every singleton, every pair and the whole group
        assert report.summary["cosets"]["value"] == 4 + 6 + 1

    def test_thespace_records_every_instance(self):
        """Walk counts hold their bound on every seeded instance."""
        config = ExperimentConfig(command="thespace-scan", p=2, n=2, instances=3)
        report = run(config)
        assert report.success
        assert len(report.records) == 3
        assert report.summary["violations"]["value"] == 0

    def test_rng_streams_in_report(self):
        report = run(ExperimentConfig(command="chang-scan", p=2, n=3, instances=4, seed=11))
        assert report.rng == {"bit_generator": "Philox", "seed": 11, "streams": [0, 1, 2, 3]}
