"""
Pydantic models for job specs, plans, step results and reports
"""
import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Command = Literal["entropy-profile", "modular", "one-particle", "fock-verify", "geometry-sweep", "acceptance"]

MONTE_CARLO_COMMANDS = {"geometry-sweep", "acceptance"}


class JobSpec(BaseModel):
    """Batch job request"""

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "command": "entropy-profile",
                "input": "tent.json",
                "output": "tent_profile.csv",
                "grid": [0.0, 0.5, 1.0, 1.5, 2.0, 2.5],
            }
        }
    )

    command: Command
    input: Optional[str] = None
    output: Optional[str] = None
    seed: Optional[int] = None
    tol: Optional[float] = Field(None, gt=0)
    grid: Optional[List[float]] = None
    cutoff: Optional[int] = Field(None, ge=0)
    samples: Optional[int] = Field(None, ge=1)
    payload: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _seed_for_sampling(self) -> "JobSpec":
        if self.command in MONTE_CARLO_COMMANDS and self.seed is None:
            raise ValueError(f"command {self.command!r} samples randomly and needs a seed")
        return self

    def overrides(self) -> Dict[str, Any]:
        """Settings fields set from the job"""
        return {
            "algebraic_tol": self.tol,
            "fock_cutoff": self.cutoff,
            "samples": self.samples,
            "seed": self.seed,
        }


class SubspaceDescriptor(BaseModel):
    """Real span of complex vectors, each given as [[re, im], ...]"""

    ambient_dim: int = Field(..., ge=1)
    span: List[List[List[float]]]

    @model_validator(mode="after")
    def _check_lengths(self) -> "SubspaceDescriptor":
        for vector in self.span:
            if len(vector) != self.ambient_dim or any(len(z) != 2 for z in vector):
                raise ValueError(f"span vectors must have {self.ambient_dim} [re, im] pairs")
        return self


class PacketDescriptor(BaseModel):
    type: Literal["tent", "piecewise_linear", "bump", "hermite"] = "tent"
    start: float = 0.0
    peak: float = 1.0
    end: float = 2.0
    height: float = 1.0
    center: float = 0.0
    radius: float = 1.0
    knots: Optional[List[float]] = None
    values: Optional[List[float]] = None
    derivs: Optional[List[float]] = None


class SymplecticDescriptor(BaseModel):
    sigma: Optional[List[List[float]]] = None
    mu: Optional[List[List[float]]] = None
    omega: Optional[float] = None
    beta: Optional[float] = None

    @model_validator(mode="after")
    def _one_form(self) -> "SymplecticDescriptor":
        matrices = self.sigma is not None and self.mu is not None
        thermal = self.omega is not None and self.beta is not None
        if matrices == thermal:
            raise ValueError("give either sigma and mu, or omega and beta")
        return self


class FockDescriptor(BaseModel):
    theta: float = Field(..., gt=0)
    phi: List[List[float]]
    cutoff: Optional[int] = Field(None, ge=0)


class RegionDescriptor(BaseModel):
    chart: Literal["minkowski_boost", "minkowski_translation", "kruskal_time"] = "minkowski_boost"
    region: Dict[str, Any] = Field(default_factory=lambda: {"type": "wedge"})
    lambda_: float = Field(0.0, alias="lambda")
    mass: float = Field(1.0, gt=0)
    s_grid: List[float] = Field(default_factory=lambda: [0.1, 1.0, 5.0])
    box: Optional[List[List[float]]] = None
    omega: Optional[List[float]] = None

    model_config = ConfigDict(populate_by_name=True)


class PlanStep(BaseModel):
    """Individual step in the execution plan"""

    step_number: int
    action: str
    tool: str
    params: Dict[str, Any]
    reasoning: str


class ExecutionPlan(BaseModel):
    """Complete execution plan from Planner Agent"""

    task: str
    steps: List[PlanStep]
    estimated_tools: List[str]


class Verdict(BaseModel):
    """Named check; margin > 0 means the check passed with room to spare"""

    name: str
    passed: bool
    margin: float

    @field_validator("margin")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("verdict margin must be finite")
        return v

    @classmethod
    def within(cls, name: str, value: float, bound: float) -> "Verdict":
        """value ≤ bound"""
        if not math.isfinite(value):
            return cls(name=name, passed=False, margin=-max(abs(bound), 1.0))
        return cls(name=name, passed=value <= bound, margin=bound - value)

    @classmethod
    def at_least(cls, name: str, value: float, bound: float) -> "Verdict":
        """value ≥ bound"""
        if not math.isfinite(value):
            return cls(name=name, passed=False, margin=-max(abs(bound), 1.0))
        return cls(name=name, passed=value >= bound, margin=value - bound)

    @classmethod
    def flag(cls, name: str, ok: bool) -> "Verdict":
        return cls(name=name, passed=bool(ok), margin=1.0 if ok else -1.0)


class ToolResult(BaseModel):
    """Result from a tool action"""

    tool: str
    action: str = ""
    step_number: int = 0
    success: bool
    data: Optional[Dict[str, Any]] = None
    verdicts: List[Verdict] = Field(default_factory=list)
    error: Optional[str] = None
    context: Dict[str, Any] = Field(default_factory=dict)


class ExecutionResult(BaseModel):
    """Results from Executor Agent"""

    plan: ExecutionPlan
    results: List[ToolResult]
    execution_time: float


class Report(BaseModel):
    """Final report; contains no timings so identical runs serialise identically"""

    command: str
    config: Dict[str, Any]
    results: Dict[str, Any]
    verdicts: List[Verdict]
    passed: bool


class ErrorResponse(BaseModel):
    """Error response model"""

    error: str
    details: Optional[str] = None
    step: Optional[str] = None
