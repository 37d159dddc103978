"""Dense complex matrix kernels: Schur form, eigenpairs, singular values, norms.

Factorizations delegate to LAPACK through numpy/scipy; every factor handed
back is re-checked against explicit residual tolerances, and eigenvector
extraction flags clustered spectra instead of returning garbage.  The
tolerances below are package defaults, overridable per call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ClusteredSpectrumError, NumericalError

EIG_RESIDUAL_TOL = 1e-8   # * ||A||_F: residual to accept lambda as an eigenvalue
EIG_GAP_TOL = 1e-8        # * ||A||_F: eigenvalues closer than this are clustered
UNITARY_TOL = 1e-12       # * n: for ||Q^H Q - I||_F
TRIANGULAR_TOL = 1e-12    # * ||A||_F: for the strictly lower part of T
RECONSTRUCT_TOL = 1e-10   # * ||A||_F: for ||A - Q T Q^H||_F


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Validate and convert to a dense complex matrix with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or min(m.shape) < 1:
        raise ValueError(f"expected a 2-d matrix with positive dimensions, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def frobenius_norm(m) -> float:
    """Square root of the sum of squared entry moduli."""
    return float(np.linalg.norm(as_matrix(m)))


def operator_norm(m) -> float:
    """Largest singular value."""
    return float(np.linalg.svd(as_matrix(m), compute_uv=False)[0])


def smallest_singular_value(m) -> float:
    """Least singular value (0 for rank-deficient input)."""
    return float(np.linalg.svd(as_matrix(m), compute_uv=False)[-1])


@dataclass(frozen=True)
class SchurForm:
    """Unitary q and upper-triangular t with a = q t q^H."""

    q: np.ndarray
    t: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        """Diagonal of t: the full eigenvalue multiset of the source matrix."""
        return np.diag(self.t).copy()

    def reconstruct(self) -> np.ndarray:
        return self.q @ self.t @ self.q.conj().T


def schur(a, *, unitary_tol: float = UNITARY_TOL, triangular_tol: float = TRIANGULAR_TOL,
          reconstruct_tol: float = RECONSTRUCT_TOL) -> SchurForm:
    """Complex Schur decomposition with verified residuals.

    Raises NumericalError if the QR iteration fails to converge or any of the
    unitarity / triangularity / reconstruction residuals exceeds tolerance.
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    try:
        t, q = scipy.linalg.schur(m, output="complex")
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Schur iteration failed to converge: {exc}") from exc
    anorm = float(np.linalg.norm(m))
    unit_err = float(np.linalg.norm(q.conj().T @ q - np.eye(n)))
    if unit_err > unitary_tol * n:
        raise NumericalError(f"Schur factor not unitary: residual {unit_err:.3e}")
    tri_err = float(np.linalg.norm(np.tril(t, -1)))
    if tri_err > triangular_tol * max(anorm, 1e-300):
        raise NumericalError(f"Schur factor not triangular: residual {tri_err:.3e}")
    recon_err = float(np.linalg.norm(m - q @ t @ q.conj().T))
    if recon_err > reconstruct_tol * max(anorm, 1e-300):
        raise NumericalError(f"Schur reconstruction residual too large: {recon_err:.3e}")
    return SchurForm(q=q, t=t)


def eigenvalues(a) -> np.ndarray:
    """Eigenvalue multiset via the verified Schur form."""
    return schur(a).eigenvalues


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the largest-modulus entry is real positive (first on ties)."""
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    if pivot != 0:
        v = v * (pivot.conjugate() / abs(pivot))
    return v


def _svd_eigenpair(m: np.ndarray, lam: complex, residual_tol: float):
    """Unit right/left eigenvectors of m for eigenvalue lam, via one SVD.

    Returns (x, y, residual_right, residual_left); no simplicity check.
    """
    n = m.shape[0]
    anorm = float(np.linalg.norm(m))
    shifted = m - lam * np.eye(n)
    u, s, vh = np.linalg.svd(shifted)
    smin = float(s[-1])
    tol = residual_tol * (anorm if anorm > 0.0 else 1.0)
    if smin > tol:
        raise ValueError(f"{lam!r} is not an eigenvalue within tolerance "
                         f"(sigma_min {smin:.3e} > {tol:.3e})")
    x = _fix_phase(vh[-1].conj())
    y = _fix_phase(u[:, -1].copy())
    res_right = float(np.linalg.norm(m @ x - lam * x))
    res_left = float(np.linalg.norm(m.conj().T @ y - np.conj(lam) * y))
    if res_right > tol or res_left > tol:
        raise NumericalError(f"eigenvector residuals {res_right:.3e}/{res_left:.3e} "
                             f"exceed tolerance {tol:.3e}")
    return x, y, res_right, res_left


def right_eigenvector(a, lam, *, residual_tol: float = EIG_RESIDUAL_TOL) -> np.ndarray:
    """Unit right eigenvector for lam (no simplicity requirement)."""
    m = as_matrix(a, square=True)
    x, _, _, _ = _svd_eigenpair(m, complex(lam), residual_tol)
    return x


def _simple_gap(m: np.ndarray, lam: complex, anorm: float, gap_tol: float) -> None:
    """Raise if lam is not numerically simple in the spectrum of m."""
    n = m.shape[0]
    if n < 2:
        return
    w = np.linalg.eigvals(m)
    k = int(np.argmin(np.abs(w - lam)))
    gap = float(np.min(np.abs(np.delete(w, k) - lam)))
    if gap <= gap_tol * anorm:
        raise ClusteredSpectrumError(
            f"eigenvalue {lam!r} is not simple: nearest other eigenvalue at distance "
            f"{gap:.3e} (threshold {gap_tol * anorm:.3e})",
            cluster=(lam,))


def right_left_eigenpair(a, lam, *, residual_tol: float = EIG_RESIDUAL_TOL,
                         gap_tol: float = EIG_GAP_TOL):
    """Unit right and left eigenvectors (x, y) for a simple eigenvalue lam.

    Phases are fixed so each vector's largest-modulus entry is real positive.
    Raises ValueError when lam is not an eigenvalue to tolerance and
    ClusteredSpectrumError when it is not numerically simple.
    """
    m = as_matrix(a, square=True)
    lam = complex(lam)
    _simple_gap(m, lam, float(np.linalg.norm(m)), gap_tol)
    x, y, _, _ = _svd_eigenpair(m, lam, residual_tol)
    return x, y


def unitary_with_first_column(x, *, tol: float = 1e-12) -> np.ndarray:
    """Unitary matrix whose first column is the given unit vector.

    Householder construction: with alpha = -x_1/|x_1| (alpha = -1 when
    x_1 = 0) the reflector H mapping x to alpha*e_1 is never degenerate, and
    Q = H * diag(alpha, 1, ..., 1) satisfies Q e_1 = x.
    """
    v = np.asarray(x, dtype=np.complex128).ravel()
    if v.size < 1 or not np.all(np.isfinite(v)):
        raise ValueError("expected a finite nonempty vector")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"expected a unit vector, got norm {nrm!r}")
    alpha = -(v[0] / abs(v[0])) if v[0] != 0 else -1.0 + 0.0j
    w = v.copy()
    w[0] -= alpha
    q = np.eye(v.size, dtype=np.complex128) - 2.0 * np.outer(w, w.conj()) / (w.conj() @ w)
    q[:, 0] *= alpha
    return q


def write_matrix(path, a) -> None:
    """Write a square matrix as text: a header line n, then n*n lines "re im".

    Floats use shortest round-trip formatting, so read_matrix restores the
    exact bits.
    """
    m = as_matrix(a, square=True)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{m.shape[0]}\n")
        for v in m.ravel():
            fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")


def read_matrix(path) -> np.ndarray:
    """Read the matrix text format written by write_matrix."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"{path}: header must be the matrix dimension") from exc
    if n < 1:
        raise ValueError(f"{path}: dimension must be positive, got {n}")
    if len(lines) - 1 != n * n:
        raise ValueError(f"{path}: expected {n * n} entry lines, found {len(lines) - 1}")
    out = np.empty(n * n, dtype=np.complex128)
    for k, ln in enumerate(lines[1:]):
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: line {k + 2}: expected 're im'")
        out[k] = complex(float(parts[0]), float(parts[1]))
    return as_matrix(out.reshape(n, n), square=True)
