"""Dense complex linear algebra for the two-atom Hilbert space.

Basis convention: each atom has levels |0>, |1>, |r> with indices 0, 1, 2.
The two-atom product state |ab> sits at index ``3*idx(a) + idx(b)``, so
|00> -> 0, |01> -> 1, |10> -> 3, |11> -> 4, |rr> -> 8.  All matrices are
dense, row-major, and immutable by convention (no function mutates its
arguments).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, InvariantViolated, NonSquare, NotHermitian

ATOM_LEVELS = ("0", "1", "r")
PAIR_LABELS = tuple(a + b for a in ATOM_LEVELS for b in ATOM_LEVELS)

#: Indices of the computational (qubit) subspace |00>, |01>, |10>, |11>.
COMP_INDICES = (0, 1, 3, 4)

DIM_ATOM = 3
DIM_PAIR = 9


def level_index(level: str) -> int:
    if level not in ATOM_LEVELS:
        raise ValueError(f"unknown atomic level {level!r}")
    return ATOM_LEVELS.index(level)


def pair_index(label: str) -> int:
    """Index of the two-atom basis state |ab| given its label, e.g. '1r'."""
    if len(label) != 2:
        raise ValueError(f"pair label must have two characters, got {label!r}")
    return 3 * level_index(label[0]) + level_index(label[1])


def ket(label: str) -> np.ndarray:
    """Two-atom computational basis vector |ab> as a length-9 array."""
    v = np.zeros(DIM_PAIR, dtype=complex)
    v[pair_index(label)] = 1.0
    return v


def w_state() -> np.ndarray:
    """Symmetric single-excitation state (|1r> + |r1>)/sqrt(2)."""
    return (ket("1r") + ket("r1")) / np.sqrt(2.0)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))
            and np.all(np.isfinite(b.real)) and np.all(np.isfinite(b.imag))):
        raise ValueError("tensor_product requires finite entries")
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).conj().T.copy()


def hermitian_eigenvalues(a: np.ndarray, asym_tol: float = 1e-6) -> np.ndarray:
    """Ascending real spectrum of a (numerically) Hermitian matrix.

    The input is symmetrized as (a + a^dag)/2 before decomposition; an
    asymmetry beyond ``asym_tol`` raises NotHermitian.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.conj().T))
    if asym > asym_tol:
        raise NotHermitian(f"asymmetry {asym:.3e} exceeds {asym_tol:.1e}")
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))


def expectation(rho: np.ndarray, obs: np.ndarray) -> complex:
    """tr(rho * obs); real to within floating error when obs is Hermitian."""
    rho = np.asarray(rho, dtype=complex)
    obs = np.asarray(obs, dtype=complex)
    if rho.shape != obs.shape or rho.ndim != 2:
        raise DimMismatch(f"shape mismatch {rho.shape} vs {obs.shape}")
    return complex(np.trace(rho @ obs))


def swap_operator() -> np.ndarray:
    """9x9 operator exchanging the two atoms: |ab> -> |ba>."""
    s = np.zeros((DIM_PAIR, DIM_PAIR), dtype=complex)
    for a in ATOM_LEVELS:
        for b in ATOM_LEVELS:
            s[pair_index(b + a), pair_index(a + b)] = 1.0
    return s


@dataclass(frozen=True)
class DensityDiagnostics:
    """Deviations of a candidate density matrix from its invariants."""

    trace_dev: float
    herm_dev: float
    min_eigenvalue: float


def density_diagnostics(rho: np.ndarray) -> DensityDiagnostics:
    rho = np.asarray(rho, dtype=complex)
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    trace_dev = float(abs(np.trace(rho) - 1.0))
    sym = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    return DensityDiagnostics(trace_dev, herm_dev, min_eig)


def validate_density_matrix(
    rho: np.ndarray,
    trace_tol: float = 1e-9,
    herm_tol: float = 1e-9,
    eigenvalue_floor: float = -1e-8,
) -> DensityDiagnostics:
    """Check Hermiticity, unit trace and positivity; raise on violation."""
    diag = density_diagnostics(rho)
    if diag.herm_dev > herm_tol:
        raise InvariantViolated(f"Hermiticity deviation {diag.herm_dev:.3e} > {herm_tol:.1e}")
    if diag.trace_dev > trace_tol:
        raise InvariantViolated(f"trace deviation {diag.trace_dev:.3e} > {trace_tol:.1e}")
    if diag.min_eigenvalue < eigenvalue_floor:
        raise InvariantViolated(
            f"negative eigenvalue {diag.min_eigenvalue:.3e} below {eigenvalue_floor:.1e}"
        )
    return diag
