"""
Verification Workflow - Step functions for the planner/executor/verifier pipeline
"""
import logging
from typing import Any, Dict

from agents import ExecutorAgent, PlannerAgent, VerifierAgent
from config import get_settings
from models.schemas import ExecutionPlan, ExecutionResult, JobSpec, PlanStep, Report, ToolResult

logger = logging.getLogger(__name__)

# Worker count changes scheduling only, never results
_NOT_ECHOED = {"workers"}


def config_echo(job: JobSpec) -> Dict[str, Any]:
    """Job fields and effective settings, enough to repeat the run"""
    return {
        "job": job.model_dump(exclude={"output"}),
        "settings": get_settings().model_dump(exclude=_NOT_ECHOED),
    }


async def planner_step(job: Dict[str, Any]) -> Dict[str, Any]:
    spec = JobSpec(**job)
    logger.info(f"Planner step starting for command: {spec.command}")

    planner = PlannerAgent()
    plan = await planner.create_plan(spec)

    logger.info(
        f"Planner step completed: generated {len(plan.steps)} steps, "
        f"tools={plan.estimated_tools}"
    )
    return plan.model_dump()


async def executor_step(plan: Dict[str, Any]) -> Dict[str, Any]:
    execution_plan = ExecutionPlan(
        task=plan["task"],
        steps=[PlanStep(**s) for s in plan["steps"]],
        estimated_tools=plan["estimated_tools"],
    )

    executor = ExecutorAgent()
    result = await executor.execute_plan(execution_plan)

    return {
        "plan": plan,
        "results": [r.model_dump() for r in result.results],
        "execution_time": result.execution_time,
    }


async def verifier_step(config: Dict[str, Any], execution_result: Dict[str, Any]) -> Dict[str, Any]:
    plan_data = execution_result["plan"]
    logger.info(f"Verifier step starting for command: {plan_data['task']}")

    exec_result = ExecutionResult(
        plan=ExecutionPlan(
            task=plan_data["task"],
            steps=[PlanStep(**s) for s in plan_data["steps"]],
            estimated_tools=plan_data["estimated_tools"],
        ),
        results=[ToolResult(**r) for r in execution_result["results"]],
        execution_time=execution_result["execution_time"],
    )

    verifier = VerifierAgent()
    report = await verifier.verify_and_format(config, exec_result)

    logger.info(f"Verifier step completed: passed={report.passed}")
    return report.model_dump()


async def run_pipeline(job: JobSpec) -> Report:
    """Plan, execute and verify one job"""
    plan = await planner_step(job.model_dump())
    executed = await executor_step(plan)
    return Report(**await verifier_step(config_echo(job), executed))
