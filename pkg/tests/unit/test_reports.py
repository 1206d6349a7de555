"""Unit tests for the run config, report schema and per-run context."""

import json
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from evals.results.schemas import AggregateStats, ErrorRecord, Quantity, Report, quantify
from evals.schemas.config import Command, ExperimentConfig
from evals.tasks.context import RunContext
from evals.tasks.instances import (
    all_cosets,
    all_nonempty_subsets,
    coset_count,
    random_coset,
    random_set,
    small_doubling_set,
)
from src.errors import BudgetExceededError, EmptySetError
from src.fpn import GroupCtx
from src.setops import doubling, is_coset
from src.storage.files import save_set


@pytest.mark.unit
class TestExperimentConfig:
    """Tests for config validation."""

    def test_defaults(self):
        config = ExperimentConfig(command="lintest")
        assert config.command == Command.LINTEST
        assert (config.p, config.n, config.seed) == (2, 3, 0)
        assert config.format == "json"

    def test_rejects_composite_p(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="lintest", p=9)

    def test_rejects_unknown_keys(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="lintest", colour="blue")

    def test_rejects_unknown_command(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="pfr-prove")

    @pytest.mark.parametrize(
        "field,value",
        [
            ("budget", 0),
            ("thresholds", []),
            ("thresholds", [0.0]),
            ("threshold", 1.5),
            ("gammas", [0.0]),
            ("corrupt", [-0.1]),
            ("n_values", []),
            ("seed", -1),
            ("order", 3),
        ],
    )
    def test_range_checks(self, field, value):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="brz-verify", **{field: value})

    def test_file_kind_needs_a_file(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="brz-verify", instance_kind="file")

    def test_set_size_fits_group(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="chang-scan", p=2, n=3, set_size=9)

    def test_lifted_dimensions_fit_group(self):
        """13^7 is past the largest supported order even though 13^1 is not."""
        with pytest.raises(ValidationError):
            ExperimentConfig(command="nmc-sweep", p=13, n=1, family="lifted", n_values=[1, 7])

    def test_n_values_ignored_outside_lifted_sweep(self):
        config = ExperimentConfig(command="nmc-sweep", p=13, n=1, family="identity", n_values=[1, 7])
        assert config.n_values == [1, 7]

    def test_quasi_pfr_excludes_freiman(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(command="brz-verify", quasi_pfr=True, freiman=True)

    def test_frozen(self):
        config = ExperimentConfig(command="lintest")
        with pytest.raises(ValidationError):
            config.p = 3


@pytest.mark.unit
class TestQuantity:
    """Tests for exact and float tagging."""

    def test_exact_fraction(self):
        q = Quantity.exact(Fraction(6, 8))
        assert q.kind == "exact"
        assert q.value == "3/4"
        assert q.as_fraction() == Fraction(3, 4)
        assert q.as_float() == 0.75

    def test_exact_integer(self):
        assert Quantity.exact(Fraction(4, 2)).value == 2

    def test_float(self):
        q = Quantity.floating(0.5, 1e-9)
        assert q.tolerance == 1e-9
        with pytest.raises(ValueError):
            q.as_fraction()

    def test_quantify_nested(self):
        data = quantify({"a": Fraction(1, 3), "b": [2, 0.5], "ok": True, "name": "x", "none": None})
        assert data["a"] == {"kind": "exact", "value": "1/3", "tolerance": None}
        assert data["b"][0]["value"] == 2
        assert data["b"][1] == {"kind": "float", "value": 0.5, "tolerance": 0.0}
        assert data["ok"] is True
        assert data["name"] == "x"
        assert data["none"] is None

    def test_quantify_numpy(self):
        assert quantify(np.int64(7))["value"] == 7
        assert quantify(np.float64(0.25), 1e-6)["tolerance"] == 1e-6
        assert [q["value"] for q in quantify(np.array([1, 2]))] == [1, 2]

    def test_quantify_keeps_explicit_quantities(self):
        q = Quantity.floating(0.1, 1e-3)
        assert quantify({"x": q}, tolerance=0.5)["x"]["tolerance"] == 1e-3


@pytest.mark.unit
class TestAggregateStats:
    """Tests for AggregateStats."""

    def test_from_values(self):
        stats = AggregateStats.from_values([0.5, 0.7, 0.9])
        assert stats.mean == pytest.approx(0.7)
        assert stats.std == pytest.approx(0.2)
        assert stats.min == 0.5
        assert stats.max == 0.9
        assert stats.median == 0.7
        assert stats.count == 3
        assert stats.std_error == pytest.approx(0.2 / 3**0.5)

    def test_single_value(self):
        stats = AggregateStats.from_values([0.85])
        assert stats.std == 0.0
        assert stats.count == 1

    def test_empty_raises(self):
        with pytest.raises(ValueError, match="empty list"):
            AggregateStats.from_values([])


@pytest.mark.unit
class TestReport:
    """Tests for JSON and CSV rendering."""

    @pytest.fixture
    def report(self) -> Report:
        return Report(
            command="plunnecke-scan",
            config={"p": 2},
            rng={"bit_generator": "Philox", "seed": 0, "streams": [0, 1]},
            records=[
                {"instance": 0, "K": quantify(Fraction(4, 3)), "violations": []},
                {"instance": 1, "K": quantify(1), "note": "coset"},
            ],
            summary=quantify({"violations": 0}),
            timing_ms={"total": 12.5},
        )

    def test_versions(self, report):
        data = json.loads(report.to_json())
        assert data["schema_version"] == "additive-lab/1"
        assert data["artifact_version"]
        assert data["success"] is True

    def test_comparable_drops_timing(self, report):
        data = json.loads(report.comparable())
        assert "timing_ms" not in data
        other = report.model_copy(update={"timing_ms": {"total": 99.0}})
        assert other.comparable() == report.comparable()

    def test_errors_clear_success(self, report):
        failed = report.model_copy(update={"errors": [ErrorRecord.from_exception(EmptySetError("x"), 3)]})
        assert not failed.success
        assert failed.errors[0].error_type == "EmptySetError"
        assert failed.errors[0].instance == 3

    def test_csv_projection(self, report):
        lines = report.to_csv().splitlines()
        assert lines[0] == "instance,K,violations,note"
        assert lines[1] == "0,4/3,[],"
        assert lines[2] == "1,1,,coset"

    def test_render(self, report):
        assert report.render("csv").startswith("instance,")
        assert report.render("json").startswith("{")


@pytest.mark.unit
class TestInstances:
    """Tests for seeded instance generators."""

    def test_random_set_size(self, f3_2, rng):
        assert random_set(f3_2, rng, 4).size == 4
        with pytest.raises(ValueError):
            random_set(f3_2, rng, 10)

    def test_random_coset(self, f3_3, rng):
        A, W = random_coset(f3_3, rng, 2)
        assert A.size == 9
        assert W.dim == 2
        assert is_coset(A)

    @pytest.mark.parametrize("max_doubling", [1.0, 2.0, 3.0])
    def test_small_doubling(self, f2_4, rng, max_doubling):
        for _ in range(20):
            assert doubling(small_doubling_set(f2_4, rng, max_doubling)).K <= max_doubling

    @pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
    def test_all_cosets(self, p, n):
        ctx = GroupCtx(p, n)
        cosets = list(all_cosets(ctx))
        assert len(cosets) == coset_count(ctx)
        assert len({A for A, _ in cosets}) == len(cosets)
        assert all(is_coset(A) and A.size == W.size for A, W in cosets)

    def test_all_nonempty_subsets(self, f2_3):
        subsets = list(all_nonempty_subsets(f2_3))
        assert len(subsets) == 255
        assert subsets[0].indices().tolist() == [0]
        assert subsets[-1].size == 8


@pytest.mark.unit
class TestRunContext:
    """Tests for record keeping inside a run."""

    def test_records_are_ordered_and_tagged(self):
        run = RunContext(ExperimentConfig(command="lintest"), progress=False)
        run.record(2, value=Fraction(1, 2))
        run.record(0, value=0.25)
        records = run.ordered_records()
        assert [r["instance"] for r in records] == [0, 2]
        assert records[1]["value"]["value"] == "1/2"

    def test_instance_errors_are_recorded(self):
        run = RunContext(ExperimentConfig(command="lintest"), progress=False)
        with run.instance(4):
            raise EmptySetError("nothing here")
        assert run.errors[0].instance == 4
        with pytest.raises(KeyError):
            with run.instance(5):
                raise KeyError("not a lab error")

    def test_oversized_group_is_an_instance_error(self):
        run = RunContext(ExperimentConfig(command="nmc-sweep", p=13, n=1), progress=False)
        with run.instance(0):
            run.group(7)
        assert run.errors[0].error_type == "BudgetExceededError"

    def test_streams_are_recorded(self):
        run = RunContext(ExperimentConfig(command="lintest", seed=9), progress=False)
        a = run.rng(3).integers(1000, size=5)
        b = run.rng(3).integers(1000, size=5)
        run.rng(1)
        assert np.array_equal(a, b)
        assert run.rng_info() == {"bit_generator": "Philox", "seed": 9, "streams": [1, 3]}

    def test_budget(self):
        run = RunContext(ExperimentConfig(command="lintest", budget=10), progress=False)
        with pytest.raises(BudgetExceededError):
            run.check_budget("things", 11)

    def test_default_instance_kind(self):
        brz = RunContext(ExperimentConfig(command="brz-verify"), progress=False)
        chang = RunContext(ExperimentConfig(command="chang-scan"), progress=False)
        assert brz.instance_kind == "small-doubling"
        assert chang.instance_kind == "random"

    def test_sets_from_file(self, tmp_path, corner):
        path = tmp_path / "A.txt"
        save_set(path, corner)
        config = ExperimentConfig(command="plunnecke-scan", instance_kind="file", set_file=path)
        sets = list(RunContext(config, progress=False).sets("test"))
        assert len(sets) == 1
        assert sets[0][1] == corner

    def test_cosets_respect_budget(self):
        config = ExperimentConfig(command="brz-verify", p=2, n=3, instance_kind="cosets", budget=5)
        with pytest.raises(BudgetExceededError):
            list(RunContext(config, progress=False).sets("test"))
