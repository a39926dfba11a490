"""Two-atom physical parameters and the lab-frame Hamiltonian.

The model couples |1> to |r> on both atoms with a shared drive
Omega(t) e^{i phi(t)} and a sinusoidally modulated detuning
Delta(t) = Delta_0 + delta_mod * sin(omega_mod * t).  Doubly excited pairs
are shifted by the van der Waals interaction ``v_int``:

    H(t) = -Delta(t) * (P_r(1) + P_r(2))
           + Omega(t)/2 * (e^{i phi(t)} * sum_i |1>_i<r| + h.c.)
           + v_int * |rr><rr|

The drive phase carries e^{+i phi} on the de-excitation operator |1><r|;
together with the two-pulse phase jump this yields -e^{i theta} on |01>
and |10| (verified by the protocol tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveDistance, OutOfWindow
from .pulses import PulseShape, amplitude_at

_TIME_EPS = 1e-12


def _single(op_row: int, op_col: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[op_row, op_col] = 1.0
    return m


_I3 = np.eye(3, dtype=complex)
#: sum_i |1>_i<r| on the pair space
LOWERING_SUM = np.kron(_single(1, 2), _I3) + np.kron(_I3, _single(1, 2))
RAISING_SUM = LOWERING_SUM.conj().T.copy()
#: sum_i |r>_i<r|
RYDBERG_NUMBER = np.kron(_single(2, 2), _I3) + np.kron(_I3, _single(2, 2))
#: |rr><rr|
PAIR_PROJECTOR = np.kron(_single(2, 2), _single(2, 2))


def vdw_interaction(c6: float, distance: float) -> float:
    """Van der Waals shift c6 / distance^6 (rad/us for c6 in rad/us*um^6)."""
    if distance <= 0:
        raise NonPositiveDistance(f"distance must be positive, got {distance}")
    return c6 / distance**6


@dataclass(frozen=True)
class SystemParams:
    """Two-atom constants: interaction strength and decay rates (1/us)."""

    v_int: float
    gamma0: float = 0.0
    gamma1: float = 0.0
    c6: float | None = None
    distance: float | None = None

    def __post_init__(self):
        if self.v_int <= 0:
            raise ValueError("v_int must be positive")
        if self.gamma0 < 0 or self.gamma1 < 0:
            raise ValueError("decay rates must be non-negative")
        if self.c6 is not None and self.distance is not None:
            v = vdw_interaction(self.c6, self.distance)
            if abs(v - self.v_int) > 1e-6 * abs(self.v_int):
                raise ValueError(
                    f"v_int={self.v_int} inconsistent with c6/d^6={v}"
                )


@dataclass(frozen=True)
class DriveParams:
    """Piecewise drive program: amplitude law, detuning modulation, phase jump.

    The laser phase is 0 before ``jump_time`` and ``phase_jump`` afterwards.
    ``doppler_shift`` adds a linear phase ramp shift*t to the coupling,
    modelling a quasi-static Doppler detuning of the excitation laser.
    """

    shape: PulseShape
    delta_mod: float
    omega_mod: float
    delta0: float = 0.0
    phase_jump: float = 0.0
    jump_time: float = field(default=0.0)
    doppler_shift: float = 0.0

    def __post_init__(self):
        if self.omega_mod <= 0:
            raise ValueError("omega_mod must be positive")
        if self.delta_mod < 0:
            raise ValueError("delta_mod must be non-negative")
        if not (0.0 <= self.jump_time <= self.shape.duration + _TIME_EPS):
            raise ValueError("jump_time must lie inside the pulse window")

    @property
    def duration(self) -> float:
        return self.shape.duration

    @property
    def modulation_index(self) -> float:
        return self.delta_mod / self.omega_mod


def detuning_at(drive: DriveParams, t: float) -> float:
    return drive.delta0 + drive.delta_mod * math.sin(drive.omega_mod * t)


def laser_phase_at(drive: DriveParams, t: float) -> float:
    return drive.phase_jump if t >= drive.jump_time else 0.0


def hamiltonian_at(sys: SystemParams, drive: DriveParams, t: float) -> np.ndarray:
    """9x9 lab-frame Hamiltonian at time t (rad/us)."""
    if t < -_TIME_EPS or t > drive.duration + _TIME_EPS:
        raise OutOfWindow(f"t={t} outside drive window [0, {drive.duration}]")
    omega = amplitude_at(drive.shape, t)
    phase = laser_phase_at(drive, t) + drive.doppler_shift * t
    z = 0.5 * omega * np.exp(1j * phase)
    h = sys.v_int * PAIR_PROJECTOR - detuning_at(drive, t) * RYDBERG_NUMBER
    h = h + z * LOWERING_SUM + np.conj(z) * RAISING_SUM
    return h
