"""Two-qubit amplitude-amplification search with tuned phase rotations.

One Grover-type iteration (oracle then diffusion) built from phase-rotation
oracles reaches the marked set with certainty at this register size when
the rotation angles are tuned instead of fixed at pi:

* one-item search (target |11>): oracle diag(1, 1, 1, -1); diffusion inner
  operator diag(1, -1, -1, -1),
* two-item search (target (|01> + |10>)/sqrt(2)): oracle diag(1, i, i, 1);
  diffusion inner operator diag(1, 1, 1, -i).

Both inner operators decompose into a controlled-phase gate and identical
single-qubit phase gates, so the whole circuit runs on the two-pulse gate
plus ideal single-qubit operations.  The diffusion decompositions use the
complex conjugates of the oracle-side angle conventions; the circuit table
below records the exact angles driven.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .design import GateDesign
from .lindblad import IntegratorConfig, evolve
from .linalg import COMP_INDICES, ket
from .protocol import build_schedule, cphase_unitary
from .system import SystemParams

VARIANTS = ("one_item", "two_item")
MODES = ("ideal", "pulse")


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


def phase_gate(chi: float) -> np.ndarray:
    """diag(1, e^{i chi}) on one qubit."""
    return np.diag([1.0, np.exp(1j * chi)]).astype(complex)


def single_qubit_ops() -> dict[str, np.ndarray]:
    h = hadamard()
    return {
        "h": h,
        "h_dag": h.conj().T.copy(),
        "u_pi_2": phase_gate(math.pi / 2.0),
        "u_pi_4": phase_gate(math.pi / 4.0),
    }


#: Gate angles per variant: (oracle theta, oracle chi or None,
#:                            diffusion theta, diffusion chi or None)
_CIRCUIT_ANGLES = {
    "one_item": (math.pi / 2.0, math.pi / 2.0, -math.pi / 2.0, math.pi / 2.0),
    "two_item": (-math.pi / 2.0, None, -3.0 * math.pi / 4.0, -math.pi / 4.0),
}


def _phase_pair(chi: float | None) -> np.ndarray:
    if chi is None:
        return np.eye(4, dtype=complex)
    u = phase_gate(chi)
    return np.kron(u, u)


def oracle_operator(variant: str) -> np.ndarray:
    """Marking operator: controlled-phase gate then identical phase gates."""
    theta, chi, _, _ = _circuit_angles(variant)
    return _phase_pair(chi) @ cphase_unitary(theta)


def diffusion_inner(variant: str) -> np.ndarray:
    """Reflection core of the diffusion, between the Hadamard layers."""
    _, _, theta, chi = _circuit_angles(variant)
    return _phase_pair(chi) @ cphase_unitary(theta)


def diffusion_operator(variant: str) -> np.ndarray:
    """(H x H) @ inner @ (H+ x H+)."""
    h2 = np.kron(hadamard(), hadamard())
    return h2 @ diffusion_inner(variant) @ h2.conj().T


def _circuit_angles(variant: str):
    if variant not in _CIRCUIT_ANGLES:
        raise ValueError(f"variant must be one of {VARIANTS}")
    return _CIRCUIT_ANGLES[variant]


def target_state(variant: str) -> np.ndarray:
    """Marked-set state as a 4-vector over the computational basis."""
    if variant == "one_item":
        v = np.array([0, 0, 0, 1], dtype=complex)
    else:
        v = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2.0)
    return v


@dataclass(frozen=True)
class SearchSpec:
    """Search configuration: which marked set, and ideal vs pulse-level gates."""

    variant: str
    mode: str = "ideal"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass
class SearchResult:
    variant: str
    mode: str
    fidelity: float
    thetas_used: list[float]
    stage_populations: list[dict[str, float]] = field(default_factory=list)
    final_density: np.ndarray | None = None


def _embed_single_pair(u2: np.ndarray) -> np.ndarray:
    """Two identical single-qubit gates lifted to the 9-dim pair space.

    The gate acts on the ground levels and leaves |r> untouched.
    """
    g = np.eye(3, dtype=complex)
    g[:2, :2] = u2
    return np.kron(g, g)


def _comp_populations(rho9: np.ndarray) -> dict[str, float]:
    labels = ("p00", "p01", "p10", "p11")
    return {
        lab: float(rho9[i, i].real) for lab, i in zip(labels, COMP_INDICES)
    }


def run_search(
    spec: SearchSpec,
    sys: SystemParams | None = None,
    design: GateDesign | None = None,
    shape_kind: str = "square",
    omega_peak: float | None = None,
    cfg: IntegratorConfig | None = None,
) -> SearchResult:
    """Run one oracle + diffusion iteration from |00>.

    Ideal mode is pure matrix algebra.  Pulse mode evolves the density
    matrix through the full master equation for every controlled-phase
    gate (single-qubit operations are ideal and instantaneous); it needs
    ``sys``, a ``design`` (its theta is overridden per gate), and the
    envelope parameters.
    """
    theta_o, chi_o, theta_d, chi_d = _circuit_angles(spec.variant)
    thetas = [theta_o, theta_d]
    target = target_state(spec.variant)
    if spec.mode == "ideal":
        h2 = np.kron(hadamard(), hadamard())
        state = h2 @ np.array([1, 0, 0, 0], dtype=complex)
        state = oracle_operator(spec.variant) @ state
        state = diffusion_operator(spec.variant) @ state
        fid = float(abs(target.conj() @ state) ** 2)
        return SearchResult(spec.variant, spec.mode, fid, thetas)

    if sys is None or design is None or omega_peak is None:
        raise ValueError("pulse mode needs sys, design and omega_peak")
    cfg = cfg or IntegratorConfig()
    rho = np.outer(ket("00"), ket("00").conj())
    stages = []

    def apply_unitary(u9: np.ndarray) -> None:
        nonlocal rho
        rho = u9 @ rho @ u9.conj().T

    def apply_cphase(theta: float) -> None:
        nonlocal rho
        drive = build_schedule(replace(design, theta=theta), shape_kind, omega_peak)
        result = evolve(sys, drive, rho, (0.0, drive.duration), cfg)
        rho = result.final_state
        stages.append(_comp_populations(rho))

    ops = single_qubit_ops()
    apply_unitary(_embed_single_pair(ops["h"]))
    apply_cphase(theta_o)
    if chi_o is not None:
        apply_unitary(_embed_single_pair(phase_gate(chi_o)))
    apply_unitary(_embed_single_pair(ops["h_dag"]))
    apply_cphase(theta_d)
    if chi_d is not None:
        apply_unitary(_embed_single_pair(phase_gate(chi_d)))
    apply_unitary(_embed_single_pair(ops["h"]))

    target9 = np.zeros(9, dtype=complex)
    for amp, idx in zip(target, COMP_INDICES):
        target9[idx] = amp
    fid = float(np.real(target9.conj() @ rho @ target9))
    return SearchResult(spec.variant, spec.mode, fid, thetas, stages, rho)
