"""
Models package for Pydantic schemas
"""
from .schemas import (
    JobSpec,
    SubspaceDescriptor,
    PacketDescriptor,
    SymplecticDescriptor,
    FockDescriptor,
    RegionDescriptor,
    PlanStep,
    ExecutionPlan,
    Verdict,
    ToolResult,
    ExecutionResult,
    Report,
    ErrorResponse,
)

__all__ = [
    "JobSpec",
    "SubspaceDescriptor",
    "PacketDescriptor",
    "SymplecticDescriptor",
    "FockDescriptor",
    "RegionDescriptor",
    "PlanStep",
    "ExecutionPlan",
    "Verdict",
    "ToolResult",
    "ExecutionResult",
    "Report",
    "ErrorResponse",
]
