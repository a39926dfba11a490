import math

import mpmath
import numpy as np
import pytest
from scipy.linalg import expm

from floqgate import (
    DriveParams,
    J0_FIRST_ZERO,
    bessel_j,
    design_gate,
    effective_couplings,
    frame_phase,
    population_phase_curve,
    reduced_three_level_propagate,
    reduced_two_level_propagate,
    return_ratio_candidates,
    solve_alpha,
    square_pulse,
)
from floqgate.errors import (
    MultipleRoots,
    NoRootInWindow,
    OutOfDomain,
    ResonanceUnsatisfied,
)

TWO_PI = 2 * math.pi


# ------------------------------------------------------------------
# Bessel evaluation against independent oracles
# ------------------------------------------------------------------

def bessel_series(order: int, x: float, terms: int = 60) -> float:
    """Plain power-series oracle, adequate for small |x|."""
    total = 0.0
    for k in range(terms):
        total += (-1) ** k * (x / 2.0) ** (2 * k + order) / (
            math.factorial(k) * math.factorial(k + order)
        )
    return total


def test_bessel_small_arguments_series():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j(0, 2.0) == pytest.approx(0.2238907791412357, abs=1e-14)
    for order in (0, 1, 2, 5):
        for x in (0.3, 1.7, 2.4, 4.9):
            assert bessel_j(order, x) == pytest.approx(
                bessel_series(order, x), abs=1e-12
            )


def test_bessel_high_precision_grid(rng):
    mpmath.mp.dps = 40
    orders = rng.integers(0, 51, 25)
    xs = rng.uniform(0.0, 50.0, 25)
    for m, x in zip(orders, xs):
        oracle = float(mpmath.besselj(int(m), mpmath.mpf(x)))
        assert abs(bessel_j(int(m), float(x)) - oracle) < 1e-12


def test_bessel_negative_order_identity(rng):
    for m in (1, 2, 3, 7):
        for x in rng.uniform(0.1, 20.0, 5):
            assert bessel_j(-m, float(x)) == pytest.approx(
                (-1) ** m * bessel_j(m, float(x)), abs=1e-14
            )


def test_bessel_recurrence(rng):
    xs = rng.uniform(0.5, 30.0, 40)
    ms = rng.integers(1, 20, 40)
    for m, x in zip(ms, xs):
        lhs = bessel_j(int(m) - 1, float(x)) + bessel_j(int(m) + 1, float(x))
        rhs = (2 * int(m) / float(x)) * bessel_j(int(m), float(x))
        assert abs(lhs - rhs) < 1e-9


def test_bessel_domain():
    with pytest.raises(OutOfDomain):
        bessel_j(51, 1.0)
    with pytest.raises(OutOfDomain):
        bessel_j(0, 50.5)


def test_jacobi_anger_partial_sums(rng):
    m_max = 40
    for alpha in (0.5, 2.0, 3.7, 5.0):
        ts = rng.uniform(0.0, 10.0, 20)
        w0 = 1.9
        for t in ts:
            direct = np.exp(1j * alpha * math.cos(w0 * t))
            series = sum(
                bessel_j(m, alpha) * np.exp(1j * m * (w0 * t + math.pi / 2.0))
                for m in range(-m_max, m_max + 1)
            )
            assert abs(direct - series) < 1e-8


# ------------------------------------------------------------------
# frame phase and effective couplings
# ------------------------------------------------------------------

def make_drive(omega, delta_mod, omega_mod, delta0=0.0, duration=1.0):
    return DriveParams(
        shape=square_pulse(omega, duration),
        delta_mod=delta_mod,
        omega_mod=omega_mod,
        delta0=delta0,
    )


def test_frame_phase_values():
    drive = make_drive(1.0, delta_mod=4.0, omega_mod=2.0)
    alpha = 2.0
    assert frame_phase(drive, 0.0) == pytest.approx(alpha)
    assert frame_phase(drive, math.pi / 2.0) == pytest.approx(-alpha)
    flat = make_drive(1.0, delta_mod=0.0, omega_mod=2.0, delta0=1.5)
    assert frame_phase(flat, 2.0) == pytest.approx(-3.0)


def test_effective_couplings_reference_points(closed_system):
    v = closed_system.v_int
    no_mod = make_drive(1.0, 0.0, v)
    oa, ob = effective_couplings(no_mod, closed_system)
    assert oa == pytest.approx(1.0)
    assert ob == 0.0

    at_zero = make_drive(1.0, J0_FIRST_ZERO * v, v)
    oa, _ = effective_couplings(at_zero, closed_system)
    assert abs(oa) < 1e-12

    alpha2 = make_drive(1.0, 2.0 * v, v)
    oa, ob = effective_couplings(alpha2, closed_system)
    assert oa == pytest.approx(0.2238907791, abs=1e-9)
    assert ob == pytest.approx(0.5767248078, abs=1e-9)


def test_effective_couplings_resonance_error(closed_system):
    drive = make_drive(1.0, 2.0, closed_system.v_int / 1.5)
    with pytest.raises(ResonanceUnsatisfied):
        effective_couplings(drive, closed_system)


def test_effective_couplings_low_frequency_warns(closed_system):
    drive = make_drive(closed_system.v_int / 2.0, 2.0, closed_system.v_int)
    with pytest.warns(UserWarning):
        effective_couplings(drive, closed_system)


# ------------------------------------------------------------------
# reduced propagators vs brute-force matrix exponentials
# ------------------------------------------------------------------

def two_level_h(omega_a, phase):
    return 0.5 * omega_a * np.array(
        [[0.0, np.exp(1j * phase)], [np.exp(-1j * phase), 0.0]]
    )


def ladder_h(omega_a, omega_b):
    g1 = math.sqrt(2) * omega_a / 2.0
    g2 = math.sqrt(2) * omega_b / 2.0
    return np.array([[0, g1, 0], [g1, 0, g2], [0, g2, 0]], dtype=complex)


def test_two_level_pi_pulse():
    u = reduced_two_level_propagate(2.0, math.pi / 2.0, 0.0)
    assert np.allclose(u @ np.array([1, 0]), [0, -1j], atol=1e-12)
    u2 = reduced_two_level_propagate(2.0, math.pi, 0.0)
    assert np.allclose(u2, -np.eye(2), atol=1e-12)


def test_two_level_two_pulse_phase():
    theta = 0.73
    omega_a = 1.7
    tau = math.pi / omega_a
    u = reduced_two_level_propagate(omega_a, tau, theta) @ \
        reduced_two_level_propagate(omega_a, tau, 0.0)
    assert u[0, 0] == pytest.approx(-np.exp(1j * theta), abs=1e-12)
    assert abs(u[1, 0]) < 1e-12


def test_two_level_matches_expm(rng):
    for _ in range(10):
        omega_a = rng.uniform(0.5, 4.0)
        phase = rng.uniform(-math.pi, math.pi)
        t = rng.uniform(0.1, 3.0)
        exact = expm(-1j * two_level_h(omega_a, phase) * t)
        assert np.allclose(
            reduced_two_level_propagate(omega_a, t, phase), exact, atol=1e-12
        )


def test_three_level_matches_expm(rng):
    for _ in range(10):
        oa = rng.uniform(0.3, 3.0)
        ob = rng.uniform(0.0, 9.0)
        t = rng.uniform(0.1, 4.0)
        exact = expm(-1j * ladder_h(oa, ob) * t)
        assert np.allclose(
            reduced_three_level_propagate(oa, ob, t), exact, atol=1e-12
        )


def test_three_level_unitary_and_composition(rng):
    for _ in range(5):
        oa, ob = rng.uniform(0.3, 3.0), rng.uniform(0.0, 8.0)
        t1, t2 = rng.uniform(0.1, 2.0, 2)
        u1 = reduced_three_level_propagate(oa, ob, t1)
        u2 = reduced_three_level_propagate(oa, ob, t2)
        u12 = reduced_three_level_propagate(oa, ob, t1 + t2)
        assert np.max(np.abs(u1 @ u1.conj().T - np.eye(3))) < 1e-12
        assert np.max(np.abs(u2 @ u1 - u12)) < 1e-10


def test_three_level_decoupled_top():
    oa = 1.3
    u = reduced_three_level_propagate(oa, 0.0, 0.8)
    g1 = math.sqrt(2) * oa / 2.0
    assert u[0, 0] == pytest.approx(math.cos(g1 * 0.8), abs=1e-12)
    assert abs(u[0, 2]) < 1e-15
    assert abs(u[2, 2] - 1.0) < 1e-15


def test_three_level_return_at_magic_ratios():
    tau = math.pi
    for ratio in (math.sqrt(7.0), math.sqrt(31.0)):
        u = reduced_three_level_propagate(1.0, ratio, tau)
        amp = u[0, 0]
        assert abs(amp) ** 2 >= 1.0 - 1e-12
        assert abs(np.angle(amp)) < 1e-9


def test_three_level_nonmagic_ratio_leaks():
    u = reduced_three_level_propagate(1.0, 2.0, math.pi)
    exact = expm(-1j * ladder_h(1.0, 2.0) * math.pi)
    assert abs(u[0, 0]) ** 2 < 0.999
    assert np.allclose(u, exact, atol=1e-12)


# ------------------------------------------------------------------
# return-condition branches and the alpha solve
# ------------------------------------------------------------------

def test_return_ratio_candidates_reference():
    cands = return_ratio_candidates(3)
    assert cands[0].affine_formula == pytest.approx(math.sqrt(7.0), abs=1e-12)
    assert cands[1].affine_formula == pytest.approx(math.sqrt(31.0), abs=1e-12)
    for n, cand in enumerate(cands):
        assert cand.numeric_root == pytest.approx(
            math.sqrt(8.0 * (n + 1) ** 2 - 1.0), abs=1e-9
        )
        assert cand.population_residual < 1e-9
        assert cand.phase_residual < 1e-6
    # the affine formula is exact on the first two branches only
    assert cands[0].discrepancy < 1e-12
    assert cands[1].discrepancy < 1e-12
    assert cands[2].discrepancy > 1e-3
    assert cands[3].discrepancy > 1e-3


def test_solve_alpha_reference_root():
    alpha = solve_alpha(math.sqrt(7.0))
    assert alpha == pytest.approx(2.010720907907, abs=1e-9)
    assert abs(bessel_j(1, alpha) - math.sqrt(7.0) * bessel_j(0, alpha)) < 1e-10


def test_solve_alpha_ordering_and_small_ratio():
    a_small = solve_alpha(1e-4)
    assert 0 < a_small < 0.01
    a7 = solve_alpha(math.sqrt(7.0))
    a31 = solve_alpha(math.sqrt(31.0))
    assert a7 < a31 < J0_FIRST_ZERO


def test_solve_alpha_window_errors():
    with pytest.raises(NoRootInWindow):
        solve_alpha(5.0, window=(0.1, 0.5))
    with pytest.raises(MultipleRoots):
        solve_alpha(math.sqrt(7.0), window=(1e-6, 5.5))


def test_solve_alpha_roundtrip_through_couplings(closed_system):
    ratio = math.sqrt(31.0)
    alpha = solve_alpha(ratio)
    v = closed_system.v_int
    drive = make_drive(1.0, alpha * v, v)
    oa, ob = effective_couplings(drive, closed_system)
    assert ob / oa == pytest.approx(ratio, abs=1e-8)


# ------------------------------------------------------------------
# full design
# ------------------------------------------------------------------

def test_design_reference_gate(design_n0):
    omega = TWO_PI * 3.5
    assert design_n0.alpha == pytest.approx(2.010720907907, abs=1e-9)
    j0 = bessel_j(0, design_n0.alpha)
    assert design_n0.omega_eff_a == pytest.approx(omega * j0, rel=1e-12)
    assert design_n0.gate_time == pytest.approx(2.0 * math.pi / design_n0.omega_eff_a,
                                                rel=1e-12)
    # arithmetic cross-check of the solved duration
    assert design_n0.gate_time == pytest.approx(1.31235, abs=2e-4)
    assert design_n0.tau == pytest.approx(design_n0.gate_time / 2.0, rel=1e-15)


def test_design_branch_ordering(ref_system):
    omega = TWO_PI * 3.5
    times = [design_gate(ref_system, omega, branch=n).gate_time for n in range(4)]
    assert times[0] == min(times)
    assert times == sorted(times)


def test_design_scales_inversely_with_omega(ref_system):
    t1 = design_gate(ref_system, TWO_PI * 3.5).gate_time
    t2 = design_gate(ref_system, TWO_PI * 7.0).gate_time
    assert t1 == pytest.approx(2.0 * t2, rel=1e-12)


def test_design_affine_variant(ref_system):
    omega = TWO_PI * 3.5
    numeric = design_gate(ref_system, omega, branch=2)
    affine = design_gate(ref_system, omega, branch=2, use_affine_ratio=True)
    assert numeric.ratio != pytest.approx(affine.ratio, abs=1e-6)
    assert affine.ratio == pytest.approx(affine.ratio_affine, rel=1e-15)
    assert affine.ratio_source == "affine_formula"


def test_population_phase_curve():
    pts = population_phase_curve([0.0, 2.0, math.sqrt(7.0), math.sqrt(31.0)])
    n0, p0, phi0 = pts[0]
    assert p0 == pytest.approx(math.cos(math.pi / math.sqrt(2.0)) ** 2, abs=1e-12)
    _, p_magic, phi_magic = pts[2]
    assert p_magic == pytest.approx(1.0, abs=1e-9)
    assert abs(phi_magic) < 1e-9
    _, p_magic2, phi_magic2 = pts[3]
    assert p_magic2 == pytest.approx(1.0, abs=1e-9)
    assert abs(phi_magic2) < 1e-9
    _, p_off, _ = pts[1]
    assert p_off < 1.0
