"""
Planner Agent - Converts job specs into structured execution plans
"""
import logging
from typing import Any, Dict, List

from models.schemas import ExecutionPlan, JobSpec, PlanStep

logger = logging.getLogger(__name__)


class PlannerAgent:
    """
    Planner Agent maps a job command and its input payload to tool actions.
    Every step is independent, so the executor may run them concurrently.
    """

    AVAILABLE_TOOLS = {
        "modular": {
            "name": "Modular",
            "description": "Standard subspaces, modular data and vector entropy",
            "actions": ["analyze", "identity_suite", "entropy_axioms", "thermal_example"],
        },
        "ray": {
            "name": "Ray",
            "description": "Wave packets on the light ray, entropy profiles and their convexity",
            "actions": ["entropy_profile", "qnec_suite", "representation_laws", "cross_check"],
        },
        "one_particle": {
            "name": "OneParticle",
            "description": "One-particle structures of symplectic data and thermal modes",
            "actions": ["build", "thermal", "axiom_suite"],
        },
        "fock": {
            "name": "Fock",
            "description": "Coherent states, Weyl operators and the relative entropy oracle",
            "actions": ["verify", "laws", "oracle_suite"],
        },
        "geometry": {
            "name": "Geometry",
            "description": "Wedges, strips and Killing flows, sampled",
            "actions": ["sweep", "acceptance_sweeps", "determinism_probe"],
        },
    }

    async def create_plan(self, job: JobSpec) -> ExecutionPlan:
        """
        Create an execution plan for a job

        Args:
            job: validated job spec; `payload` holds the parsed input file

        Returns:
            ExecutionPlan with structured steps
        """
        logger.info(f"Planner received job: {job.command}", extra={"input": job.input})
        builder = getattr(self, "_plan_" + job.command.replace("-", "_"))
        raw = builder(job)
        steps = [
            PlanStep(step_number=i, tool=tool, action=action, params=params, reasoning=reasoning)
            for i, (tool, action, params, reasoning) in enumerate(raw, start=1)
        ]
        for step in steps:
            if step.action not in self.AVAILABLE_TOOLS[step.tool]["actions"]:
                raise ValueError(f"planner produced unknown action {step.tool}.{step.action}")
        plan = ExecutionPlan(
            task=job.command,
            steps=steps,
            estimated_tools=sorted({s.tool for s in steps}),
        )
        logger.info(
            f"Planner created execution plan: {len(steps)} steps, "
            f"tools={plan.estimated_tools}"
        )
        return plan

    def _plan_entropy_profile(self, job: JobSpec) -> List[tuple]:
        payload = job.payload
        packet = payload.get("packet", payload if "type" in payload else None)
        grid = job.grid if job.grid is not None else payload.get("grid")
        steps = [("ray", "entropy_profile", {"packet": packet, "grid": grid}, "S, S′, S″ on the λ grid")]
        if payload.get("cross_check"):
            steps.append(("ray", "cross_check", {"packet": packet, "lam": payload.get("lambda")}, "finite-dimensional lower bounds"))
        return steps

    def _plan_modular(self, job: JobSpec) -> List[tuple]:
        payload = job.payload
        if "subspace" in payload or "ambient_dim" in payload:
            subspace = payload.get("subspace", payload)
            return [("modular", "analyze", {"subspace": subspace, "vector": payload.get("vector")}, "modular data of the given subspace")]
        seed = _seed(job)
        return [
            ("modular", "identity_suite", {"seed": seed}, "JΔJ = Δ⁻¹, S h = h, Δ^{it}H = H"),
            ("modular", "entropy_axioms", {"seed": seed}, "positivity, monotonicity, covariance, additivity"),
            ("modular", "thermal_example", {"theta": payload.get("theta", 1.0)}, "closed-form thermal entropy"),
        ]

    def _plan_one_particle(self, job: JobSpec) -> List[tuple]:
        payload = job.payload
        if payload:
            return [("one_particle", "build", dict(payload), "one-particle structure of the given data")]
        return [("one_particle", "axiom_suite", {"seed": _seed(job)}, "axioms, uniqueness and thermal modes")]

    def _plan_fock_verify(self, job: JobSpec) -> List[tuple]:
        payload = dict(job.payload)
        if payload:
            if job.cutoff is not None:
                payload["cutoff"] = job.cutoff
            return [("fock", "verify", payload, "oracle against the first-quantized entropy")]
        seed = _seed(job)
        cutoff = job.cutoff if job.cutoff is not None else 60
        return [
            ("fock", "laws", {"seed": seed}, "coherent and Weyl laws on the truncation"),
            ("fock", "oracle_suite", {"seed": seed, "cutoff": cutoff}, "displaced-thermal oracle sweep"),
        ]

    def _plan_geometry_sweep(self, job: JobSpec) -> List[tuple]:
        params: Dict[str, Any] = dict(job.payload)
        params.update({"seed": job.seed, "n_samples": job.samples})
        return [("geometry", "sweep", params, "sampled causal-structure checks on one region")]

    def _plan_acceptance(self, job: JobSpec) -> List[tuple]:
        seed = job.seed
        return [
            ("modular", "identity_suite", {"count": 100, "max_dim": 8, "seed": seed}, "modular identities"),
            ("modular", "entropy_axioms", {"count": 50, "max_dim": 6, "seed": seed}, "entropy axioms"),
            ("modular", "thermal_example", {"theta": 1.0}, "closed-form thermal entropy"),
            ("ray", "qnec_suite", {"count": 50, "grid_points": 200, "seed": seed}, "convexity of S(λ)"),
            ("ray", "representation_laws", {"count": 50, "seed": seed}, "U, V, J and the generator"),
            ("ray", "entropy_profile", {}, "tent profile"),
            ("ray", "cross_check", {}, "finite-dimensional lower bounds"),
            ("one_particle", "axiom_suite", {"count": 100, "max_dim": 10, "seed": seed}, "one-particle axioms"),
            ("fock", "laws", {"seed": seed}, "coherent and Weyl laws"),
            ("fock", "oracle_suite", {"count": 20, "cutoff": 60, "seed": seed}, "relative entropy oracle"),
            ("geometry", "acceptance_sweeps", {"seed": seed, "n_samples": job.samples}, "geometry sweeps"),
            ("geometry", "determinism_probe", {"seed": seed}, "worker-count independence"),
        ]


def _seed(job: JobSpec) -> int:
    return 0 if job.seed is None else job.seed
