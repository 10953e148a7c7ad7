"""
Tools package - verification tools, one per numerical module
"""
from .modular_tool import ModularTool
from .ray_tool import RayTool
from .one_particle_tool import OneParticleTool
from .fock_tool import FockTool
from .geometry_tool import GeometryTool

__all__ = [
    "ModularTool",
    "RayTool",
    "OneParticleTool",
    "FockTool",
    "GeometryTool",
]
