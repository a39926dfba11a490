"""Floquet analysis and gate design for the modulated two-atom drive.

Sinusoidal detuning modulation at index ``alpha = delta_mod/omega_mod``
dresses the bare coupling with Bessel-weighted sidebands
(Jacobi-Anger expansion).  Two effective channels matter:

* ground pair <-> single excitation, weight J0(alpha) (static term), and
* single <-> double excitation, weight J1(alpha) once the modulation
  frequency bridges the interaction shift (omega_mod = v_int).

A controlled-phase gate uses two identical pulses of duration
tau = pi/|Omega_a| with a laser phase jump in between.  The doubly
occupied sector returns to itself with zero phase exactly when the
coupling ratio N = |Omega_b|/|Omega_a| makes the three-level ladder
splitting commensurate with tau, i.e. N = sqrt(8 k^2 - 1) for integer
k >= 1.  The affine formula (sqrt(31)-sqrt(7))n + sqrt(7) reproduces the
first two roots and is reported alongside the numeric roots for
comparison.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import jn_zeros, jv

from .errors import MultipleRoots, NoRootInWindow, OutOfDomain, ResonanceUnsatisfied
from .linalg import hermitian_eigenvalues
from .system import DriveParams, SystemParams

#: First positive zero of J0; the principal design window is (0, this).
J0_FIRST_ZERO = float(jn_zeros(0, 1)[0])

_MAX_ORDER = 50
_MAX_ARG = 50.0


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind J_order(x).

    Restricted to |order| <= 50 and |x| <= 50, the regime exercised here;
    satisfies J_{-m}(x) = (-1)^m J_m(x).
    """
    if abs(order) > _MAX_ORDER or abs(x) > _MAX_ARG:
        raise OutOfDomain(f"bessel_j limited to |order|<={_MAX_ORDER}, |x|<={_MAX_ARG}")
    return float(jv(order, x))


def frame_phase(drive: DriveParams, t: float) -> float:
    """Accumulated rotating-frame phase -delta0*t + alpha*cos(omega_mod*t)."""
    return -drive.delta0 * t + drive.modulation_index * math.cos(drive.omega_mod * t)


def effective_couplings(drive: DriveParams, sys: SystemParams) -> tuple[float, float]:
    """Magnitudes (|Omega_a|, |Omega_b|) of the resonant effective couplings.

    |Omega_a| = Omega * |J0(alpha)| from the static sideband;
    |Omega_b| = Omega * |J_|m|(alpha)| from the sideband of order m solving
    m*omega_mod = -v_int.  Raises ResonanceUnsatisfied when no integer
    order matches within 1e-6 relative.  The constant sideband phase
    factors e^{i m pi/2} do not enter the magnitudes; the b channel at
    omega_mod = v_int carries m = -1 (net phase +pi/2).
    """
    if drive.omega_mod < 5.0 * drive.shape.omega_peak:
        warnings.warn(
            "modulation frequency below 5x peak Rabi; sideband truncation "
            "is inaccurate in this regime",
            stacklevel=2,
        )
    m_exact = -sys.v_int / drive.omega_mod
    m = round(m_exact)
    if m == 0 or abs(m_exact - m) > 1e-6 * abs(m_exact):
        raise ResonanceUnsatisfied(
            f"no integer m solves m*omega_mod = -v_int (m_exact={m_exact:.6g})"
        )
    alpha = drive.modulation_index
    omega = drive.shape.omega_peak
    return (
        omega * abs(bessel_j(0, alpha)),
        omega * abs(bessel_j(abs(m), alpha)),
    )


def reduced_two_level_propagate(omega_a: float, duration: float, phase: float) -> np.ndarray:
    """Exact propagator of the resonant two-level drive (basis |01>, |0r>).

    The Hamiltonian is (omega_a/2) (e^{i phase} |01><0r| + h.c.); a pi
    pulse at phase 0 maps |01> -> -i|0r>.
    """
    half = 0.5 * omega_a * duration
    c = math.cos(half)
    s = math.sin(half)
    return np.array(
        [[c, -1j * s * np.exp(1j * phase)],
         [-1j * s * np.exp(-1j * phase), c]],
        dtype=complex,
    )


def _ladder_hamiltonian(omega_a: float, omega_b: float) -> np.ndarray:
    g1 = math.sqrt(2.0) * omega_a / 2.0
    g2 = math.sqrt(2.0) * omega_b / 2.0
    return np.array(
        [[0.0, g1, 0.0], [g1, 0.0, g2], [0.0, g2, 0.0]], dtype=complex
    )


def reduced_three_level_propagate(omega_a: float, omega_b: float, duration: float) -> np.ndarray:
    """Exact propagator of the resonant ladder |11> <-> |W> <-> |rr>.

    Couplings are sqrt(2)*omega_a/2 and sqrt(2)*omega_b/2.  With
    g = sqrt(g1^2 + g2^2) the propagator is closed-form:
    U = I - i sin(g t)/g H + (cos(g t) - 1)/g^2 H^2.
    """
    h = _ladder_hamiltonian(omega_a, omega_b)
    g = math.sqrt((abs(omega_a) ** 2 + abs(omega_b) ** 2) / 2.0)
    if g == 0.0:
        return np.eye(3, dtype=complex)
    gt = g * duration
    h2 = h @ h
    return (
        np.eye(3, dtype=complex)
        + ((math.cos(gt) - 1.0) / g**2) * h2
        - (1j * math.sin(gt) / g) * h
    )


@dataclass(frozen=True)
class ReturnRatioCandidate:
    """One solution branch of the doubly-occupied return condition."""

    branch: int
    affine_formula: float     # (sqrt(31)-sqrt(7))*n + sqrt(7)
    numeric_root: float       # ladder splitting commensurate with tau
    discrepancy: float
    population_residual: float  # 1 - P11 at the numeric root
    phase_residual: float       # |Phi11| at the numeric root


def return_ratio_candidates(max_branch: int) -> list[ReturnRatioCandidate]:
    """Coupling ratios N restoring |11> with zero phase after tau.

    For each branch n the numeric root solves g(N)*tau = 2*pi*(n+1) where
    g(N) is the ladder eigensplitting computed from the assembled 3x3
    Hamiltonian; the root is then verified against the brute-force
    propagator.  The affine formula value is reported for comparison.
    """
    if max_branch < 0:
        raise ValueError("max_branch must be non-negative")
    out = []
    for n in range(max_branch + 1):
        k = n + 1
        affine = (math.sqrt(31.0) - math.sqrt(7.0)) * n + math.sqrt(7.0)

        def splitting_defect(ratio: float, k: int = k) -> float:
            eigs = hermitian_eigenvalues(_ladder_hamiltonian(1.0, ratio))
            return float(eigs[-1]) * math.pi - 2.0 * math.pi * k

        guess = math.sqrt(8.0 * k * k - 1.0)
        root = brentq(splitting_defect, guess - 1.0, guess + 1.0, xtol=1e-14)
        u = reduced_three_level_propagate(1.0, root, math.pi)
        amp = u[0, 0]
        out.append(
            ReturnRatioCandidate(
                branch=n,
                affine_formula=affine,
                numeric_root=float(root),
                discrepancy=float(abs(root - affine)),
                population_residual=float(1.0 - abs(amp) ** 2),
                phase_residual=float(abs(np.angle(amp))),
            )
        )
    return out


def solve_alpha(ratio: float, window: tuple[float, float] | None = None) -> float:
    """Modulation index alpha with J1(alpha) = ratio * J0(alpha).

    ``window`` must bracket exactly one root; default is the principal
    window (0, first J0 zero) where J0 > 0.
    """
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    lo, hi = window if window is not None else (1e-9, J0_FIRST_ZERO - 1e-12)

    def f(x: float) -> float:
        return bessel_j(1, x) - ratio * bessel_j(0, x)

    grid = np.linspace(lo, hi, 1000)
    vals = np.array([f(x) for x in grid])
    signs = np.sign(vals)
    crossings = np.nonzero(np.diff(signs[signs != 0]))[0]
    if len(crossings) == 0:
        raise NoRootInWindow(f"no sign change of J1 - {ratio}*J0 in ({lo}, {hi})")
    if len(crossings) > 1:
        raise MultipleRoots(f"{len(crossings)} sign changes in ({lo}, {hi})")
    return float(brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16))


@dataclass(frozen=True)
class GateDesign:
    """Solved controlled-phase gate parameters.

    ``ratio`` is the coupling ratio actually used (numeric root by
    default); ``ratio_affine`` keeps the affine-formula value for the same
    branch.  ``theta`` is the programmed phase jump.
    """

    branch: int
    ratio: float
    alpha: float
    omega_mod: float
    omega_eff_a: float
    omega_eff_b: float
    tau: float
    gate_time: float
    theta: float
    ratio_affine: float
    ratio_source: str = "numeric_root"

    def __post_init__(self):
        if not (0.0 < self.alpha < J0_FIRST_ZERO):
            raise ValueError("alpha outside the principal design window")
        if abs(self.omega_eff_b - self.ratio * self.omega_eff_a) > 1e-6 * self.omega_eff_a:
            raise ValueError("effective couplings inconsistent with ratio")
        if abs(self.tau - math.pi / self.omega_eff_a) > 1e-12 * self.tau:
            raise ValueError("tau inconsistent with omega_eff_a")


def design_gate(
    sys: SystemParams,
    omega_peak: float,
    branch: int = 0,
    theta: float = math.pi / 2,
    use_affine_ratio: bool = False,
) -> GateDesign:
    """Solve the full gate design at omega_mod = v_int.

    Picks the branch's coupling ratio (numeric return-condition root unless
    ``use_affine_ratio``), solves the Bessel-ratio condition for alpha in
    the principal window, and derives pulse duration tau = pi/|Omega_a| and
    gate time 2*tau.
    """
    if omega_peak <= 0:
        raise ValueError("omega_peak must be positive")
    cand = return_ratio_candidates(branch)[branch]
    ratio = cand.affine_formula if use_affine_ratio else cand.numeric_root
    alpha = solve_alpha(ratio)
    omega_a = omega_peak * bessel_j(0, alpha)
    omega_b = omega_peak * bessel_j(1, alpha)
    tau = math.pi / omega_a
    return GateDesign(
        branch=branch,
        ratio=ratio,
        alpha=alpha,
        omega_mod=sys.v_int,
        omega_eff_a=omega_a,
        omega_eff_b=omega_b,
        tau=tau,
        gate_time=2.0 * tau,
        theta=theta,
        ratio_affine=cand.affine_formula,
        ratio_source="affine_formula" if use_affine_ratio else "numeric_root",
    )


def population_phase_curve(ratio_grid) -> list[tuple[float, float, float]]:
    """(N, P11, Phi11) after one pulse of duration tau for each ratio N.

    Uses unit |Omega_a| so tau = pi; the returned phase is the argument of
    the |11> -> |11> amplitude.
    """
    out = []
    for ratio in ratio_grid:
        u = reduced_three_level_propagate(1.0, float(ratio), math.pi)
        amp = u[0, 0]
        out.append((float(ratio), float(abs(amp) ** 2), float(np.angle(amp))))
    return out
