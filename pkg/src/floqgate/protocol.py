"""Two-pulse controlled-phase protocol, channel reconstruction, fidelities.

The target gate on the computational basis (|00>, |01>, |10>, |11>) is
diag(1, -e^{i theta}, -e^{i theta}, 1): two identical pulses of duration
tau with a laser phase jump theta in between.  The realized quantum
channel is reconstructed by evolving all 16 computational matrix units
through the master equation (valid by linearity) and restricting to the
computational subspace; population left outside it is tracked as leakage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import GateDesign, bessel_j
from .lindblad import IntegratorConfig, _propagate_batch, evolve
from .linalg import COMP_INDICES, ket
from .pulses import gaussian_pulse, gaussian_width_for_area, square_pulse
from .system import DriveParams, SystemParams

_SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

#: The 16 two-qubit Pauli tensor products II, IX, ..., ZZ.
PAULI_2Q = [np.kron(_SIGMA[p], _SIGMA[q]) for p in range(4) for q in range(4)]

#: (|00> - i|01> - i|10> + |11>)/2, the theta = pi/2 gate image of |++>.
BELL_STATE = 0.5 * (ket("00") - 1j * ket("01") - 1j * ket("10") + ket("11"))

#: (|0> + |1>) x (|0> + |1>) / 2 embedded in the pair space.
PLUS_PLUS_STATE = 0.5 * (ket("00") + ket("01") + ket("10") + ket("11"))


def cphase_unitary(theta: float) -> np.ndarray:
    """Target unitary diag(1, -e^{i theta}, -e^{i theta}, 1)."""
    phase = -np.exp(1j * theta)
    return np.diag([1.0, phase, phase, 1.0]).astype(complex)


@dataclass(frozen=True)
class GateChannel:
    """Channel restricted to the computational subspace.

    ``superop`` maps row-major vec(rho_4) linearly; ``leakage`` is the mean
    population left outside the subspace after the gate, averaged over the
    four computational basis states.
    """

    superop: np.ndarray   # (16, 16)
    leakage: float

    def apply(self, rho4: np.ndarray) -> np.ndarray:
        return (self.superop @ np.asarray(rho4, dtype=complex).reshape(16)).reshape(4, 4)


def unitary_channel(u4: np.ndarray) -> GateChannel:
    """Exact conjugation channel rho -> U rho U+ (useful as an oracle)."""
    u4 = np.asarray(u4, dtype=complex)
    return GateChannel(superop=np.kron(u4, u4.conj()), leakage=0.0)


def build_schedule(
    design: GateDesign,
    shape_kind: str,
    omega_peak: float,
) -> DriveParams:
    """Drive program realizing the designed gate with the requested envelope.

    Square: constant amplitude over 2*tau with the jump at tau.  Gaussian:
    two area-matched lobes (each an effective pi pulse) over 8*t_g with the
    jump at the lobe boundary 4*t_g.  The detuning modulation is identical
    in both pulses.
    """
    if shape_kind == "square":
        shape = square_pulse(omega_peak, design.gate_time)
        jump = design.tau
    elif shape_kind == "gaussian":
        t_g = gaussian_width_for_area(omega_peak, bessel_j(0, design.alpha))
        shape = gaussian_pulse(omega_peak, t_g)
        jump = 4.0 * t_g
    else:
        raise ValueError(f"unknown shape kind {shape_kind!r}")
    return DriveParams(
        shape=shape,
        delta_mod=design.alpha * design.omega_mod,
        omega_mod=design.omega_mod,
        phase_jump=design.theta,
        jump_time=jump,
    )


def _matrix_unit_stack() -> np.ndarray:
    """All 16 computational matrix units |a><b| embedded in the pair space."""
    y0 = np.zeros((16, 81), dtype=complex)
    for k, (a, b) in enumerate((a, b) for a in COMP_INDICES for b in COMP_INDICES):
        y0[k, 9 * a + b] = 1.0
    return y0


def _channel_from_states(states: np.ndarray) -> GateChannel:
    """Assemble the restricted channel from 16 evolved matrix units (16, 81)."""
    rho = states.reshape(16, 9, 9)
    comp = np.asarray(COMP_INDICES)
    blocks = rho[:, comp[:, None], comp[None, :]]        # (16, 4, 4)
    superop = blocks.reshape(16, 16).T.copy()
    leak = 0.0
    for k, (a, b) in enumerate((a, b) for a in COMP_INDICES for b in COMP_INDICES):
        if a == b:
            leak += 1.0 - float(np.trace(blocks[k]).real)
    return GateChannel(superop=superop, leakage=leak / 4.0)


def realize_channel(
    sys: SystemParams,
    drive: DriveParams,
    cfg: IntegratorConfig | None = None,
) -> GateChannel:
    """Quantum channel of the full noisy gate over [0, duration]."""
    cfg = cfg or IntegratorConfig()
    t_eval = np.array([0.0, drive.duration])
    samples = _propagate_batch(
        sys, drive, _matrix_unit_stack(), (0.0, drive.duration), cfg, t_eval
    )
    return _channel_from_states(samples[-1])


def average_gate_fidelity(channel: GateChannel, theta: float) -> float:
    """Pauli-averaged gate fidelity of the channel against the target gate.

    F = [sum_k tr(U U_k+ U+ xi(U_k)) + d^2] / [d^2 (d+1)] with d = 4 and
    U_k running over the two-qubit Pauli tensors.
    """
    target = cphase_unitary(theta)
    d = 4
    total = 0.0 + 0.0j
    for pauli in PAULI_2Q:
        xi = channel.apply(pauli)
        total += np.trace(target @ pauli.conj().T @ target.conj().T @ xi)
    value = (total + d * d) / (d * d * (d + 1))
    if abs(value.imag) > 1e-9:
        raise ValueError(f"fidelity has imaginary residue {value.imag:.2e}")
    return float(value.real)


def average_fidelity_closed_form(u4: np.ndarray, theta: float) -> float:
    """(|tr(U_target+ V)|^2 + d) / (d^2 + d) for a unitary channel V."""
    d = 4
    overlap = np.trace(cphase_unitary(theta).conj().T @ np.asarray(u4, dtype=complex))
    return float((abs(overlap) ** 2 + d) / (d * d + d))


def fidelity_trajectory(
    sys: SystemParams,
    drive: DriveParams,
    theta: float,
    cfg: IntegratorConfig | None = None,
    samples: int = 1000,
) -> list[tuple[float, float]]:
    """Average gate fidelity of the partially evolved channel at each time."""
    if samples < 2:
        raise ValueError("need at least two samples")
    cfg = cfg or IntegratorConfig()
    t_eval = np.linspace(0.0, drive.duration, samples)
    stack = _propagate_batch(
        sys, drive, _matrix_unit_stack(), (0.0, drive.duration), cfg, t_eval
    )
    out = []
    for i, t in enumerate(t_eval):
        channel = _channel_from_states(stack[i])
        out.append((float(t), average_gate_fidelity(channel, theta)))
    return out


def bell_fidelity(
    sys: SystemParams,
    drive: DriveParams,
    cfg: IntegratorConfig | None = None,
) -> float:
    """Overlap of the evolved |++> product state with the Bell-type target.

    Requires the schedule's phase jump to be pi/2 (the angle whose ideal
    gate maps |++> exactly onto the target state).
    """
    if not math.isclose(drive.phase_jump, math.pi / 2.0, abs_tol=1e-12):
        raise ValueError("bell_fidelity requires a pi/2 phase jump")
    rho0 = np.outer(PLUS_PLUS_STATE, PLUS_PLUS_STATE.conj())
    result = evolve(sys, drive, rho0, (0.0, drive.duration), cfg)
    return float(np.real(BELL_STATE.conj() @ result.final_state @ BELL_STATE))
