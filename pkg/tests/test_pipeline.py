import asyncio
import math

import pytest

from agents import ExecutorAgent, PlannerAgent, VerifierAgent
from models.schemas import ExecutionPlan, JobSpec, PlanStep
from tools.report_io import dumps
from workflows import config_echo, run_pipeline

TENT_GRID = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5]


def _step(number, tool, action, **params):
    return PlanStep(step_number=number, tool=tool, action=action, params=params, reasoning="")


def test_entropy_profile_job():
    job = JobSpec(command="entropy-profile", grid=TENT_GRID, payload={"type": "tent"})
    report = asyncio.run(run_pipeline(job))
    assert report.passed
    profile = report.results["ray.entropy_profile"]
    assert profile["kinks"] == [0.0, 1.0, 2.0]
    assert [row["lambda"] for row in profile["rows"]] == TENT_GRID
    assert all(v.name.startswith("ray.entropy_profile:") for v in report.verdicts)


def test_identical_jobs_serialise_identically():
    job = JobSpec(command="entropy-profile", grid=TENT_GRID)
    first = asyncio.run(run_pipeline(job))
    second = asyncio.run(run_pipeline(job))
    assert dumps(first.model_dump()) == dumps(second.model_dump())


def test_modular_job_with_descriptor(pair_descriptor, theta):
    c = math.exp(-theta / 2.0)
    job = JobSpec(command="modular", payload={**pair_descriptor, "vector": [[c, 0.0], [1.0, 0.0]]})
    report = asyncio.run(run_pipeline(job))
    assert report.passed
    analysis = report.results["modular.analyze"]
    assert analysis["standard"]
    assert analysis["entropy"] == pytest.approx(theta * (1 - math.exp(-theta)), abs=1e-10)


def test_failed_step_becomes_failing_verdict():
    job = JobSpec(
        command="one-particle",
        payload={"sigma": [[0.0, 1.0], [-1.0, 0.0]], "mu": [[0.5, 0.0], [0.0, 0.5]]},
    )
    report = asyncio.run(run_pipeline(job))
    assert not report.passed
    assert [v.name for v in report.verdicts] == ["one_particle.build:completed"]
    entry = report.results["one_particle.build"]
    assert entry["error"].startswith("DominationViolated")
    assert entry["context"]["min_eigenvalue"] == pytest.approx(-0.5)


def test_acceptance_plan():
    plan = asyncio.run(PlannerAgent().create_plan(JobSpec(command="acceptance", seed=1)))
    assert len(plan.steps) == 12
    assert [s.step_number for s in plan.steps] == list(range(1, 13))
    assert plan.estimated_tools == ["fock", "geometry", "modular", "one_particle", "ray"]
    assert all(s.params.get("seed", 1) == 1 for s in plan.steps)


def test_modular_plan_without_payload_runs_suites():
    plan = asyncio.run(PlannerAgent().create_plan(JobSpec(command="modular", seed=4)))
    assert [s.action for s in plan.steps] == ["identity_suite", "entropy_axioms", "thermal_example"]


def test_executor_filters_unknown_params():
    result = ExecutorAgent()._execute_step(_step(1, "modular", "thermal_example", theta=1.0, bogus=3))
    assert result.success
    assert result.verdicts
    assert all(v.passed for v in result.verdicts)


def test_executor_reports_missing_tool_and_action():
    executor = ExecutorAgent()
    missing_tool = executor._execute_step(_step(1, "teleport", "go"))
    assert not missing_tool.success
    assert "teleport" in missing_tool.error
    missing_action = executor._execute_step(_step(2, "modular", "teleport"))
    assert not missing_action.success


def test_executor_keeps_step_order_and_verifier_groups_repeats():
    plan = ExecutionPlan(
        task="modular",
        steps=[
            _step(1, "modular", "thermal_example", theta=2.0),
            _step(2, "modular", "thermal_example", theta=0.5),
            _step(3, "one_particle", "thermal", omega=1.0, beta=1.0),
        ],
        estimated_tools=["modular", "one_particle"],
    )
    executed = asyncio.run(ExecutorAgent(max_concurrency=3).execute_plan(plan))
    assert [r.step_number for r in executed.results] == [1, 2, 3]

    report = asyncio.run(VerifierAgent().verify_and_format({}, executed))
    assert report.passed
    assert isinstance(report.results["modular.thermal_example"], list)
    assert len(report.results["modular.thermal_example"]) == 2


def test_config_echo_excludes_scheduling():
    echo = config_echo(JobSpec(command="modular", output="report.json", seed=3))
    assert "workers" not in echo["settings"]
    assert "output" not in echo["job"]
    assert echo["job"]["seed"] == 3
    assert echo["settings"]["algebraic_tol"] == 1e-10
