"""
Conversions from JSON descriptors to core objects, and the tool error guard
"""
import functools
import logging
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from core.errors import ToolkitError
from core.linalg_utils import as_complex_vector
from core.schrodinger_ray import WavePacket
from core.standard_subspace import ComplexSpace, RealSubspace
from models.schemas import PacketDescriptor, SubspaceDescriptor, Verdict

logger = logging.getLogger(__name__)


def subspace_from_descriptor(desc: Dict[str, Any]) -> RealSubspace:
    spec = SubspaceDescriptor(**desc)
    vectors = [as_complex_vector(v) for v in spec.span]
    span = np.column_stack(vectors) if vectors else np.zeros((spec.ambient_dim, 0), dtype=complex)
    return RealSubspace(ComplexSpace(spec.ambient_dim), span)


def packet_from_descriptor(desc: Dict[str, Any]) -> WavePacket:
    spec = PacketDescriptor(**desc)
    if spec.type == "tent":
        return WavePacket.tent(spec.start, spec.peak, spec.end, spec.height)
    if spec.type == "bump":
        return WavePacket.bump(spec.center, spec.radius, spec.height)
    if spec.knots is None or spec.values is None:
        raise ValueError(f"{spec.type} packets need knots and values")
    if spec.type == "piecewise_linear":
        return WavePacket.piecewise_linear(spec.knots, spec.values)
    if spec.derivs is None:
        raise ValueError("hermite packets need derivs")
    return WavePacket.from_hermite(spec.knots, spec.values, spec.derivs)


def complex_pairs(vector: Sequence[complex]) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vector, dtype=complex)]


def verdicts_passed(verdicts: List[Verdict]) -> bool:
    return all(v.passed for v in verdicts)


def tool_action(method: Callable[..., Dict[str, Any]]) -> Callable[..., Dict[str, Any]]:
    """Catch toolkit and validation errors into {"success": False, "error": ...}"""

    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        try:
            return method(self, *args, **kwargs)
        except ToolkitError as e:
            logger.warning(f"{type(self).__name__}.{method.__name__} failed: {e}")
            return {"success": False, "error": f"{type(e).__name__}: {e}", "context": e.context}
        except ValueError as e:
            logger.warning(f"{type(self).__name__}.{method.__name__} rejected input: {e}")
            return {"success": False, "error": f"{type(e).__name__}: {e}", "context": {}}

    return wrapper
