"""Unit tests for the oracle suites, at reduced case counts."""

import numpy as np
import pytest

from ensemblr.harness.oracle_check import (
    SUITES,
    SuiteResult,
    check_dataset,
    check_gradients,
    check_resolution,
    check_selection,
    gradient_error,
    random_estimator_case,
    run_suites,
)
from ensemblr.utils.errors import ContractError


class TestSuites:
    """Each suite agrees with its oracle."""

    def test_resolution(self):
        result = check_resolution(cases=10, seed=3)
        assert result.ok, result.details
        assert result.cases == 10

    def test_dataset(self):
        result = check_dataset(cases=5, seed=1)
        assert result.ok, result.details

    def test_selection(self):
        result = check_selection(cases=200, seed=0)
        assert result.ok, result.details

    @pytest.mark.slow
    def test_gradients(self):
        result = check_gradients(cases=10, seed=0)
        assert result.ok, result.details

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_gradient_error_small(self, seed):
        model, xs, y = random_estimator_case(np.random.default_rng(seed), seed)
        assert gradient_error(model, xs, y) < 1e-4


class TestRunSuites:
    """Suite selection."""

    def test_named_suite(self):
        results = run_suites(["dataset"], seed=0)
        assert [r.name for r in results] == ["dataset"]

    def test_unknown_suite(self):
        with pytest.raises(ContractError, match="Unknown oracle suites: bogus"):
            run_suites(["dataset", "bogus"])

    def test_all_expands(self, monkeypatch):
        calls = []
        for name in list(SUITES):
            monkeypatch.setitem(
                SUITES, name, lambda seed, name=name: calls.append(name) or SuiteResult(name, 1, 0, [])
            )
        results = run_suites(["all"], seed=4)
        assert calls == ["resolution", "dataset", "selection", "gradients"]
        assert all(r.ok for r in results)

    def test_failures_reported(self, monkeypatch):
        monkeypatch.setitem(SUITES, "dataset", lambda seed: SuiteResult("dataset", 2, 1, ["case 0: differs"]))
        (result,) = run_suites(["dataset"])
        assert not result.ok
        assert result.details == ["case 0: differs"]
