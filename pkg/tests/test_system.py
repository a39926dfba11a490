import math

import numpy as np
import pytest

from floqgate import (
    DriveParams,
    SystemParams,
    detuning_at,
    hamiltonian_at,
    ket,
    laser_phase_at,
    square_pulse,
    vdw_interaction,
    w_state,
)
from floqgate.errors import NonPositiveDistance, OutOfWindow
from floqgate.linalg import swap_operator

TWO_PI = 2 * math.pi


def make_drive(omega=TWO_PI * 3.5, delta_mod=0.0, omega_mod=TWO_PI * 70.18,
               delta0=0.0, theta=0.0, jump=0.5, duration=1.0):
    return DriveParams(
        shape=square_pulse(omega, duration),
        delta_mod=delta_mod,
        omega_mod=omega_mod,
        delta0=delta0,
        phase_jump=theta,
        jump_time=jump,
    )


def test_detuning_modulation():
    drive = make_drive(delta_mod=2.0, omega_mod=math.pi, delta0=0.0)
    assert detuning_at(drive, 0.0) == 0.0
    assert detuning_at(drive, 0.5) == pytest.approx(2.0)
    flat = make_drive(delta_mod=0.0, delta0=1.3)
    for t in (0.0, 0.2, 0.9):
        assert detuning_at(flat, t) == 1.3


def test_laser_phase_step():
    drive = make_drive(theta=math.pi / 2, jump=0.5)
    assert laser_phase_at(drive, 0.25) == 0.0
    assert laser_phase_at(drive, 0.75) == math.pi / 2
    assert laser_phase_at(drive, 0.5) == math.pi / 2
    none = make_drive(theta=0.0)
    assert laser_phase_at(none, 0.9) == 0.0


def test_hamiltonian_interaction_only():
    sys_p = SystemParams(v_int=5.0)
    drive = make_drive(omega=0.0)
    h = hamiltonian_at(sys_p, drive, 0.3)
    expected = np.zeros((9, 9), dtype=complex)
    expected[8, 8] = 5.0
    assert np.allclose(h, expected, atol=1e-15)


def test_hamiltonian_hermitian_and_dark_00(ref_system):
    drive = make_drive(delta_mod=3.0, theta=0.7, jump=0.4)
    for t in np.linspace(0.0, 1.0, 13):
        h = hamiltonian_at(ref_system, drive, t)
        assert np.max(np.abs(h - h.conj().T)) < 1e-12
        row = h[0]
        assert np.max(np.abs(np.delete(row, 0))) == 0.0
        assert row[0] == 0.0


def test_hamiltonian_collective_matrix_element(ref_system):
    drive = make_drive(theta=0.9, jump=0.2)
    for t in (0.1, 0.6):
        h = hamiltonian_at(ref_system, drive, t)
        phi = laser_phase_at(drive, t)
        omega = TWO_PI * 3.5
        expected = math.sqrt(2) * 0.5 * omega * np.exp(-1j * phi)
        got = w_state().conj() @ h @ ket("11")
        assert got == pytest.approx(expected, abs=1e-12)


def test_hamiltonian_swap_symmetry(ref_system):
    drive = make_drive(delta_mod=4.0, theta=1.1, jump=0.3)
    s = swap_operator()
    for t in (0.0, 0.37, 0.95):
        h = hamiltonian_at(ref_system, drive, t)
        assert np.max(np.abs(s @ h @ s - h)) < 1e-12


def test_hamiltonian_diagonal_without_drive(ref_system):
    drive = make_drive(omega=0.0, delta_mod=2.5)
    h = hamiltonian_at(ref_system, drive, 0.4)
    assert np.max(np.abs(h - np.diag(np.diag(h)))) == 0.0


def test_hamiltonian_window(ref_system):
    drive = make_drive()
    with pytest.raises(OutOfWindow):
        hamiltonian_at(ref_system, drive, 1.5)


def test_vdw_reference_value():
    c6 = TWO_PI * 858.4e3   # rad/us * um^6
    v = vdw_interaction(c6, 4.8)
    assert v / TWO_PI == pytest.approx(70.18, abs=0.01)
    assert vdw_interaction(c6, 9.6) == pytest.approx(v / 64.0)
    assert vdw_interaction(c6, 1.0) == c6
    with pytest.raises(NonPositiveDistance):
        vdw_interaction(c6, 0.0)


def test_system_params_validation():
    with pytest.raises(ValueError):
        SystemParams(v_int=-1.0)
    with pytest.raises(ValueError):
        SystemParams(v_int=1.0, gamma0=-0.1)
    # consistent c6/distance pair accepted
    c6 = TWO_PI * 858.4e3
    v = vdw_interaction(c6, 4.8)
    SystemParams(v_int=v, c6=c6, distance=4.8)
    with pytest.raises(ValueError):
        SystemParams(v_int=2 * v, c6=c6, distance=4.8)


def test_drive_params_validation():
    with pytest.raises(ValueError):
        make_drive(omega_mod=0.0)
    with pytest.raises(ValueError):
        make_drive(delta_mod=-1.0)
    with pytest.raises(ValueError):
        make_drive(jump=2.0)  # beyond duration
