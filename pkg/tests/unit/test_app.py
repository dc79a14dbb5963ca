"""Unit tests for the command-line interface."""

import json
import logging
import os

import pytest
from click.testing import CliRunner

from ensemblr import __version__
from ensemblr.app import EXIT_FAILURE, EXIT_USAGE, cli
from ensemblr.estimates import Estimator, save_checkpoint
from ensemblr.factory import will_arrive_estimate


@pytest.fixture(autouse=True)
def root_logger():
    """Commands replace the root handlers; put the original ones back."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def runner():
    """Keeps stderr logs and errors out of the command output."""
    return CliRunner(mix_stderr=False)


@pytest.fixture
def checkpoint(tmp_path):
    """Untrained will_arrive weights saved as a checkpoint."""
    estimate = will_arrive_estimate()
    path = tmp_path / "training-1.json"
    save_checkpoint(Estimator.for_estimate(estimate, hidden_units=4, seed=1), estimate.name, str(path), "run")
    return path


class TestCli:
    """Commands and exit codes."""

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_oracle_check(self, runner):
        result = runner.invoke(cli, ["oracle-check", "--suite", "dataset", "--seed", "2"])
        assert result.exit_code == 0, result.output
        assert "dataset: 20 cases, 0 mismatches" in result.output

    def test_oracle_check_unknown_suite(self, runner):
        result = runner.invoke(cli, ["oracle-check", "--suite", "bogus"])
        assert result.exit_code == EXIT_USAGE

    def test_bench(self, runner):
        result = runner.invoke(cli, ["bench", "--sizes", "8", "--trials", "2"])
        assert result.exit_code == 0, result.output
        lines = result.stdout.strip().splitlines()
        assert len(lines) == 2
        assert lines[0] == "candidates,instances,trials,greedy_ms,exact_ms,feasible,greedy_solved,violations"
        assert lines[1].startswith("8,2,2,")
        assert lines[1].endswith(",0")

    def test_bench_invalid_sizes(self, runner):
        result = runner.invoke(cli, ["bench", "--sizes", "8,big"])
        assert result.exit_code == EXIT_USAGE
        assert "Invalid --sizes" in result.stderr

    def test_boundary(self, runner, checkpoint, tmp_path):
        out = tmp_path / "grid.csv"
        result = runner.invoke(cli, ["boundary", "--checkpoint", str(checkpoint), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert result.output.startswith("business=")
        assert "weekend=" in result.output
        assert os.path.isfile(out)
        assert os.path.isfile(tmp_path / "grid-cutoffs.csv")

    def test_boundary_wrong_estimate(self, runner, tmp_path):
        estimate = will_arrive_estimate()
        path = tmp_path / "other.json"
        save_checkpoint(Estimator.for_estimate(estimate), "other", str(path))
        result = runner.invoke(cli, ["boundary", "--checkpoint", str(path), "--out", str(tmp_path / "b.csv")])
        assert result.exit_code == EXIT_FAILURE
        assert "not 'will_arrive'" in result.stderr

    def test_boundary_missing_checkpoint(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["boundary", "--checkpoint", str(tmp_path / "absent.json"), "--out", str(tmp_path / "b.csv")]
        )
        assert result.exit_code == EXIT_FAILURE
        assert "does not exist" in result.stderr

    def test_run_invalid_override(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "--weeks", "0", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_USAGE
        assert "Invalid configuration" in result.stderr
        assert result.stdout == ""

    def test_run_missing_config(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "--config", str(tmp_path / "absent.yaml")])
        assert result.exit_code == EXIT_USAGE
        assert "does not exist" in result.stderr

    @pytest.mark.slow
    def test_run(self, runner, tmp_path):
        config = tmp_path / "experiment.yaml"
        config.write_text("shiftsCount: 1\nworkersPerShift: 4\nstandbysPerShift: 2\nweeks: 1\n")
        out = tmp_path / "out"
        result = runner.invoke(cli, ["run", "--config", str(config), "--seed", "5", "--out", str(out)])
        assert result.exit_code == 0, result.output
        run_id, out_dir = result.output.strip().splitlines()[-1].split(" ")
        assert out_dir == str(out)
        with open(out / "summary.json") as f:
            summary = json.load(f)
        assert summary["run_id"] == run_id
        assert summary["config"]["seed"] == 5
