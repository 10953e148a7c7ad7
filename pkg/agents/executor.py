"""
Executor Agent - Executes plans by calling the verification tools
"""
import asyncio
import inspect
import logging
import time
from typing import List, Optional, Tuple

from config import get_settings
from models.schemas import ExecutionPlan, ExecutionResult, PlanStep, ToolResult, Verdict
from tools import FockTool, GeometryTool, ModularTool, OneParticleTool, RayTool

logger = logging.getLogger(__name__)

_RESERVED = {"success", "verdicts", "passed", "error", "context"}


class ExecutorAgent:
    """
    Executor Agent executes the plan created by Planner Agent.
    Steps are independent; they run concurrently in worker threads and
    results are returned in step order.
    """

    def __init__(self, max_concurrency: Optional[int] = None):
        self.tools = {
            "modular": ModularTool(),
            "ray": RayTool(),
            "one_particle": OneParticleTool(),
            "fock": FockTool(),
            "geometry": GeometryTool(),
        }
        self.max_concurrency = max_concurrency or get_settings().workers

    async def execute_plan(self, plan: ExecutionPlan) -> ExecutionResult:
        """
        Execute every step of the plan

        Args:
            plan: ExecutionPlan from Planner Agent

        Returns:
            ExecutionResult with results from each step, in step order
        """
        logger.info(
            "Executor starting plan",
            extra={
                "task": plan.task,
                "total_steps": len(plan.steps),
            },
        )
        start_time = time.time()
        semaphore = asyncio.Semaphore(max(self.max_concurrency, 1))

        async def execute_with_index(idx: int, step: PlanStep) -> Tuple[int, ToolResult]:
            async with semaphore:
                step_start_time = time.time()
                logger.info(
                    f"Executor STARTING step {step.step_number} (tool={step.tool}, action={step.action})",
                    extra={"step_number": step.step_number, "tool": step.tool, "action": step.action},
                )
                result = await asyncio.to_thread(self._execute_step, step)
                logger.info(
                    f"Executor COMPLETED step {step.step_number} (tool={step.tool}) in {time.time() - step_start_time:.3f}s",
                    extra={
                        "step_number": step.step_number,
                        "tool": result.tool,
                        "success": result.success,
                        "error": result.error,
                    },
                )
                return idx, result

        batch_results = await asyncio.gather(*[execute_with_index(i, s) for i, s in enumerate(plan.steps)])
        # Sort by original index to maintain step order
        batch_results.sort(key=lambda x: x[0])
        results: List[ToolResult] = [r for _, r in batch_results]

        execution_time = time.time() - start_time
        logger.info(
            f"Executor completed plan in {execution_time:.3f}s",
            extra={"task": plan.task, "execution_time": execution_time},
        )
        return ExecutionResult(plan=plan, results=results, execution_time=execution_time)

    def _execute_step(self, step: PlanStep) -> ToolResult:
        """
        Execute a single step

        Args:
            step: PlanStep to execute

        Returns:
            ToolResult with success/failure, data and verdicts
        """
        tool_name, action = step.tool, step.action
        base = {"tool": tool_name, "action": action, "step_number": step.step_number}
        tool = self.tools.get(tool_name)
        if not tool:
            logger.error(f"Tool '{tool_name}' not found")
            return ToolResult(**base, success=False, error=f"Tool '{tool_name}' not found")
        if not hasattr(tool, action):
            logger.error(f"Action '{action}' not found in tool '{tool_name}'")
            return ToolResult(**base, success=False, error=f"Action '{action}' not found in tool '{tool_name}'")

        method = getattr(tool, action)
        sig = inspect.signature(method)
        takes_any = any(p.kind is inspect.Parameter.VAR_KEYWORD for p in sig.parameters.values())
        params = {k: v for k, v in step.params.items() if v is not None}
        filtered_params = params if takes_any else {k: v for k, v in params.items() if k in sig.parameters}
        if filtered_params != params:
            removed = set(params) - set(filtered_params)
            logger.warning(
                f"Executor filtering out unsupported params for {tool_name}.{action}: "
                f"{removed}. Using: {sorted(filtered_params)}"
            )

        try:
            result_data = method(**filtered_params)
        except Exception as e:
            logger.exception(f"Executor step raised exception: tool={tool_name}, action={action}, error={e}")
            return ToolResult(**base, success=False, error=f"{type(e).__name__}: {e}")

        if not result_data.get("success", False):
            error_msg = result_data.get("error", "Unknown error")
            logger.warning(f"Executor step failed: tool={tool_name}, action={action}, error={error_msg}")
            return ToolResult(**base, success=False, error=error_msg, context=result_data.get("context", {}))
        return ToolResult(
            **base,
            success=True,
            data={k: v for k, v in result_data.items() if k not in _RESERVED},
            verdicts=[Verdict(**v) for v in result_data.get("verdicts", [])],
        )
