"""
Verifier Agent - Folds step results into the final report
"""
import logging
from typing import Any, Dict, List

from models.schemas import ExecutionResult, Report, ToolResult, Verdict

logger = logging.getLogger(__name__)


class VerifierAgent:
    """
    Verifier Agent collects data and verdicts from every step. A failed
    step becomes a failing verdict, so the report never passes silently.
    """

    async def verify_and_format(self, config: Dict[str, Any], execution_result: ExecutionResult) -> Report:
        """
        Verify execution results and build the report

        Args:
            config: config echo (job fields and effective settings)
            execution_result: Results from Executor Agent

        Returns:
            Report with per-step results and the flattened verdict list
        """
        command = execution_result.plan.task
        logger.info(f"Verifier starting: command={command}, total_results={len(execution_result.results)}")

        failed_steps = [r for r in execution_result.results if not r.success]
        if failed_steps:
            logger.warning(
                f"Verifier detected {len(failed_steps)} failed steps: "
                f"{[self._label(f) for f in failed_steps]}"
            )

        collected: Dict[str, Any] = {}
        verdicts: List[Verdict] = []
        for result in execution_result.results:
            label = self._label(result)
            if result.success:
                entry = result.data or {}
                verdicts += [
                    Verdict(name=f"{label}:{v.name}", passed=v.passed, margin=v.margin) for v in result.verdicts
                ]
            else:
                entry = {"error": result.error, "context": result.context}
                verdicts.append(Verdict(name=f"{label}:completed", passed=False, margin=-1.0))
            # Same action called more than once: store as list
            if label in collected:
                if not isinstance(collected[label], list):
                    collected[label] = [collected[label]]
                collected[label].append(entry)
            else:
                collected[label] = entry

        passed = all(v.passed for v in verdicts)
        logger.info(
            f"Verifier completed: passed={passed}, verdicts={len(verdicts)}",
            extra={"failed": [v.name for v in verdicts if not v.passed]},
        )
        return Report(command=command, config=config, results=collected, verdicts=verdicts, passed=passed)

    @staticmethod
    def _label(result: ToolResult) -> str:
        return f"{result.tool}.{result.action}"
