"""
Fock tool - coherent-state laws and the displaced-thermal relative entropy oracle
"""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import get_settings
from core.fock import (
    araki_relative_entropy_blocks,
    araki_relative_entropy_oracle,
    coherent_vector,
    inner_product_tail,
    second_quantized_modular,
    thermal_occupation,
    vacuum_expectation,
    weyl_apply,
    weyl_relation_residual,
)
from core.linalg_utils import as_complex_vector, make_rng
from core.standard_subspace import direct_sum, entropy, thermal_pair
from models.schemas import FockDescriptor, Verdict
from .descriptors import complex_pairs, tool_action, verdicts_passed

logger = logging.getLogger(__name__)

ORACLE_THETAS = (0.5, 1.0, 2.0)


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), get_settings().coherent_tail_tol)


def _random_vector(rng: np.random.Generator, modes: int, max_norm: float) -> np.ndarray:
    v = rng.normal(size=modes) + 1j * rng.normal(size=modes)
    return v / np.linalg.norm(v) * max_norm * math.sqrt(rng.uniform())


class FockTool:
    """Tool for truncated symmetric Fock space"""

    @tool_action
    def verify(self, theta: float = 1.0, phi: Optional[List[List[float]]] = None, cutoff: Optional[int] = None) -> Dict[str, Any]:
        """
        Compare the first-quantized entropy with the displaced-thermal oracle

        Args:
            theta: log of the Δ eigenvalue of the thermal block
            phi: vector in ℂ² as [[re, im], [re, im]] (default: (0.3, 0.4i))
            cutoff: Fock cutoff N

        Returns:
            Dict with both values, the relative deviation and per-block diagnostics
        """
        desc = FockDescriptor(theta=theta, phi=phi or [[0.3, 0.0], [0.0, 0.4]], cutoff=cutoff)
        cutoff = get_settings().fock_cutoff if desc.cutoff is None else desc.cutoff
        vector = as_complex_vector(desc.phi)
        h = thermal_pair(desc.theta)
        first = entropy(h, vector)
        report = araki_relative_entropy_blocks(h, vector, cutoff)
        oracle = araki_relative_entropy_oracle(h, vector, cutoff)
        deviation = _relative(oracle, first)
        verdicts = [
            Verdict.within("oracle_agreement", deviation, get_settings().oracle_rel_tol),
            Verdict.within("block_formula", _relative(report.first_quantized, first), 1e-8),
        ]
        return {
            "success": True,
            "theta": desc.theta,
            "phi": complex_pairs(vector),
            "cutoff": cutoff,
            "first_quantized": first,
            "oracle": oracle,
            "relative_deviation": deviation,
            "blocks": [
                {
                    "theta": b.theta,
                    "alpha": [b.alpha.real, b.alpha.imag],
                    "value": b.value,
                    "trace_deficit": b.trace_deficit,
                    "thermal_tail": b.thermal_tail,
                }
                for b in report.blocks
            ],
            "verdicts": [v.model_dump() for v in verdicts],
            "passed": verdicts_passed(verdicts),
        }

    @tool_action
    def laws(self, count: int = 10, seed: int = 0, modes: int = 2) -> Dict[str, Any]:
        """Coherent inner products, vacuum expectations, Weyl relations and the W(ψ)e^φ calibration"""
        inner = vac = weyl = calibration = 0.0
        for k in range(count):
            rng = make_rng(seed, 60, k)
            phi = _random_vector(rng, modes, 1.0)
            psi = _random_vector(rng, modes, 1.0)

            truncated = coherent_vector(phi, 40).inner(coherent_vector(psi, 40))
            exact = np.exp(np.vdot(psi, phi))
            inner = max(inner, abs(truncated - exact) - inner_product_tail(phi, psi, 40))

            vac = max(vac, abs(vacuum_expectation(psi, 60) - math.exp(-0.5 * float(np.vdot(psi, psi).real))))
            weyl = max(weyl, weyl_relation_residual(psi, phi, 60))

            moved = weyl_apply(psi, coherent_vector(phi, 60))
            factor = np.exp(-0.5 * np.vdot(psi, psi).real - np.vdot(psi, phi))
            target = factor * coherent_vector(psi + phi, 60).coeffs
            calibration = max(calibration, float(np.max(np.abs(moved.coeffs - target))))
        verdicts = [
            Verdict.within("coherent_inner_product", inner, 1e-12),
            Verdict.within("vacuum_expectation", vac, 1e-8),
            Verdict.within("weyl_relation", weyl, 1e-6),
            Verdict.within("weyl_coherent_calibration", calibration, 1e-8),
        ]
        return {
            "success": True,
            "count": count,
            "max_inner_product_excess": inner,
            "max_vacuum_error": vac,
            "max_weyl_residual": weyl,
            "max_calibration_error": calibration,
            "verdicts": [v.model_dump() for v in verdicts],
            "passed": verdicts_passed(verdicts),
        }

    @tool_action
    def oracle_suite(
        self, count: int = 20, cutoff: int = 60, seed: int = 0, thetas: Sequence[float] = ORACLE_THETAS
    ) -> Dict[str, Any]:
        """Oracle vs first-quantized entropy, Γ(Δ) structure, block additivity and quadratic scaling"""
        settings = get_settings()
        worst: Dict[str, float] = {}
        for theta in thetas:
            h = thermal_pair(theta)
            deviation = 0.0
            for k in range(count):
                phi = _random_vector(make_rng(seed, 70, k), 2, 1.0)
                deviation = max(deviation, _relative(araki_relative_entropy_oracle(h, phi, cutoff), entropy(h, phi)))
            worst[str(theta)] = deviation

        e = math.e
        levels = second_quantized_modular([e, 1.0 / e], 2).level(2)
        gamma = float(np.max(np.abs(levels - np.array([e**-2, 1.0, e**2]))))
        occupation = max(abs(thermal_occupation(t, cutoff)[0] - 1.0 / math.expm1(t)) for t in thetas)

        rng = make_rng(seed, 71)
        phi = _random_vector(rng, 4, 1.0)
        h1, h2 = thermal_pair(thetas[0]), thermal_pair(thetas[-1])
        joint = araki_relative_entropy_blocks(direct_sum(h1, h2), phi, cutoff).value
        parts = araki_relative_entropy_oracle(h1, phi[:2], cutoff) + araki_relative_entropy_oracle(h2, phi[2:], cutoff)
        additivity = _relative(joint, parts)

        h = thermal_pair(2.0)
        base = _random_vector(rng, 2, 0.5)
        scaling = _relative(araki_relative_entropy_oracle(h, 2.0 * base, cutoff), 4.0 * araki_relative_entropy_oracle(h, base, cutoff))

        verdicts = [Verdict.within(f"oracle_theta_{t}", d, settings.oracle_rel_tol) for t, d in worst.items()]
        verdicts += [
            Verdict.within("second_quantized_levels", gamma, settings.algebraic_tol),
            Verdict.within("thermal_occupation", occupation, settings.thermal_tail_tol),
            Verdict.within("block_additivity", additivity, 1e-6),
            Verdict.within("quadratic_scaling", scaling, settings.oracle_rel_tol),
        ]
        logger.info(f"Oracle suite over {count} vectors per θ", extra={"suite": "fock_oracle", "cutoff": cutoff})
        return {
            "success": True,
            "count": count,
            "cutoff": cutoff,
            "max_relative_deviation": worst,
            "level_error": gamma,
            "occupation_error": occupation,
            "additivity_error": additivity,
            "scaling_error": scaling,
            "verdicts": [v.model_dump() for v in verdicts],
            "passed": verdicts_passed(verdicts),
        }
