"""Dense real/complex linear algebra for the solver core.

Everything downstream consumes the spectral factorization A = U diag(D) U^-1
produced here: the convergence check on the spectral radius, the largest
eigenvalue of the Hermitian product U* Q U, and the Gram inverse (U U*)^-1.
Complex arithmetic is used throughout even when A has only real eigenvalues,
so there is a single code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonSquare, NotDiagonalizable, NotHermitian, Singular

# Acceptance thresholds for a factorization (entrywise max norm).
TOL_RECON = 1e-9
# A decomposition is rejected when cond(U) exceeds 1/TOL_DIAG.
TOL_DIAG = 1e-10
# Strict-convergence margin: rho < 1 - TOL_RHO.
TOL_RHO = 1e-12


def _as_square(A: np.ndarray) -> np.ndarray:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


@dataclass(eq=False)
class SpectralDecomposition:
    """Eigenbasis factorization A = U diag(D) U_inv.

    Eigenvalues in D are sorted by decreasing modulus, ties broken by
    decreasing real part, then decreasing imaginary part, so that repeated
    runs produce identical output. rho is the spectral radius max |D_i|.
    """

    U: np.ndarray
    D: np.ndarray
    U_inv: np.ndarray
    rho: float

    @property
    def dim(self) -> int:
        return self.D.size


def eig_decompose(A) -> SpectralDecomposition:
    """Diagonalize a real square matrix.

    Raises NotDiagonalizable when the eigenvector matrix is numerically
    singular (condition estimate above 1/TOL_DIAG) or when the factorization
    fails to reconstruct A within TOL_RECON * (1 + max|A|).
    """
    A = _as_square(np.asarray(A, dtype=float))
    w, V = np.linalg.eig(A)
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    D = w[order].astype(complex)
    U = V[:, order].astype(complex)

    cond = np.linalg.cond(U)
    if not np.isfinite(cond) or cond > 1.0 / TOL_DIAG:
        raise NotDiagonalizable(
            f"eigenvector matrix has condition estimate {cond:.3e} (limit {1.0 / TOL_DIAG:.1e})"
        )
    U_inv = np.linalg.inv(U)

    scale = 1.0 + float(np.max(np.abs(A)))
    recon_err = float(np.max(np.abs(A - (U * D) @ U_inv)))
    if recon_err > TOL_RECON * scale:
        raise NotDiagonalizable(f"reconstruction error {recon_err:.3e} exceeds tolerance")
    ident_err = float(np.max(np.abs(U @ U_inv - np.eye(D.size))))
    if ident_err > TOL_RECON:
        raise NotDiagonalizable(f"inverse check failed with error {ident_err:.3e}")

    return SpectralDecomposition(U=U, D=D, U_inv=U_inv, rho=float(np.max(np.abs(D))))


def spectral_radius_check(dec: SpectralDecomposition) -> bool:
    """True iff the system is strictly convergent: rho < 1 - TOL_RHO."""
    return dec.rho < 1.0 - TOL_RHO


def hermitian_lambda_max(B) -> float:
    """Largest (real) eigenvalue of a Hermitian matrix.

    The input must be Hermitian within 1e-9 * (1 + max|B|); it is averaged
    with its conjugate transpose before the eigenvalue computation.
    """
    B = _as_square(np.asarray(B, dtype=complex))
    scale = 1.0 + float(np.max(np.abs(B)))
    asym = float(np.max(np.abs(B - B.conj().T)))
    if asym > 1e-9 * scale:
        raise NotHermitian(f"asymmetry {asym:.3e} exceeds tolerance {1e-9 * scale:.3e}")
    H = (B + B.conj().T) / 2.0
    return float(np.linalg.eigvalsh(H)[-1])


def gram_inverse(U) -> np.ndarray:
    """Hermitian positive-definite inverse (U U*)^-1 of the Gram matrix of U."""
    U = _as_square(np.asarray(U, dtype=complex))
    G = U @ U.conj().T
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e14:
        raise Singular(f"Gram matrix has condition {cond:.3e}")
    M = np.linalg.inv(G)
    # enforce exact Hermitian symmetry against rounding
    return (M + M.conj().T) / 2.0


def matrix_power_step(P_k, A) -> np.ndarray:
    """Advance a cached matrix power one step: returns A @ P_k."""
    return np.asarray(A) @ np.asarray(P_k)
