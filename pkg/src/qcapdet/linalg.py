"""Dense complex linear algebra for small Hilbert spaces.

Everything works in the fixed computational basis: transposition and complex
conjugation below always refer to that basis, and the operator/vector
correspondence ``double_ket`` is taken in the same basis.  All entropies are
in bits (base-2 logarithms), with the convention 0*log2(0) = 0.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError

# Tolerances. Subsystem dimensions stay below ~16, so double precision
# leaves orders of magnitude of headroom around each of these.
HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
ORTHO_TOL = 1e-9
PSD_TOL = 1e-10
PROB_TOL = 1e-9
RECON_TOL = 1e-9
TP_TOL = 1e-9
PINV_CUTOFF = 1e-12  # relative to the largest eigenvalue


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InvalidStateError("matrix contains non-finite entries")
    return a


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """Return (M + M^dagger) / 2."""
    return (m + m.conj().T) / 2.0


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def validate_density_matrix(rho) -> np.ndarray:
    """Check Hermiticity, positivity and unit trace; return the array.

    Raises InvalidStateError if any invariant fails beyond tolerance.
    """
    rho = as_complex_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError(f"density matrix must be square, got {rho.shape}")
    if not is_hermitian(rho):
        raise InvalidStateError("density matrix is not Hermitian within tolerance")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace {tr} differs from 1")
    evals = np.linalg.eigvalsh(hermitian_part(rho))
    if evals.min() < -PSD_TOL:
        raise InvalidStateError(f"density matrix has negative eigenvalue {evals.min()}")
    return rho


def probability_vector(values) -> np.ndarray:
    """Validate and clamp a probability vector to [0, 1] entrywise."""
    p = np.asarray(values, dtype=float).reshape(-1)
    if p.min() < -PROB_TOL or p.max() > 1.0 + PROB_TOL:
        raise InvalidStateError(f"probability entries outside [0,1]: min={p.min()}, max={p.max()}")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise InvalidStateError(f"probabilities sum to {p.sum()}, not 1")
    return np.clip(p, 0.0, 1.0)


def _entropy_bits(spectrum: np.ndarray) -> float:
    """-sum(x log2 x) over nonnegative weights, with 0 log2 0 = 0."""
    x = np.asarray(spectrum, dtype=float)
    x = x[x > 0.0]
    if x.size == 0:
        return 0.0
    return float(-np.sum(x * np.log2(x)))


def von_neumann_entropy(rho) -> float:
    """Spectral entropy of a density matrix, in bits."""
    rho = validate_density_matrix(rho)
    evals = np.linalg.eigvalsh(hermitian_part(rho))
    return _entropy_bits(np.clip(evals, 0.0, None))


def shannon_entropy(p) -> float:
    """Entropy of a probability vector, in bits."""
    return _entropy_bits(probability_vector(p))


def binary_entropy(x: float) -> float:
    """-x log2 x - (1-x) log2 (1-x) for x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x} outside [0, 1]")
    return _entropy_bits(np.array([x, 1.0 - x]))


def double_ket(a) -> np.ndarray:
    """Unfold a square operator A into the bipartite vector with
    component (n*d + m) equal to A[n, m]."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"double_ket needs a square matrix, got {a.shape}")
    return a.reshape(-1).copy()


def operator_from_double_ket(v) -> np.ndarray:
    """Inverse of double_ket: fold a length-d^2 vector back into a d x d operator."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionMismatchError(f"vector length {v.size} is not a perfect square")
    return v.reshape(d, d).copy()


def double_ket_inner(a, b) -> complex:
    """Inner product of two double-kets; equals Tr[A^dagger B]."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a.reshape(-1), b.reshape(-1)))


def partial_trace_reference(m, dim_ref: int, dim_sys: int) -> np.ndarray:
    """Trace out the first tensor factor of an operator on dim_ref * dim_sys."""
    m = as_complex_matrix(m)
    n = dim_ref * dim_sys
    if m.shape != (n, n):
        raise DimensionMismatchError(f"matrix shape {m.shape} does not factor as {dim_ref}x{dim_sys}")
    return np.einsum("iaib->ab", m.reshape(dim_ref, dim_sys, dim_ref, dim_sys))


def partial_trace_system(m, dim_ref: int, dim_sys: int) -> np.ndarray:
    """Trace out the second tensor factor of an operator on dim_ref * dim_sys."""
    m = as_complex_matrix(m)
    n = dim_ref * dim_sys
    if m.shape != (n, n):
        raise DimensionMismatchError(f"matrix shape {m.shape} does not factor as {dim_ref}x{dim_sys}")
    return np.einsum("iaja->ij", m.reshape(dim_ref, dim_sys, dim_ref, dim_sys))


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # orthonormal columns, aligned with eigenvalues


def hermitian_eigen(m) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    m = as_complex_matrix(m)
    if not is_hermitian(m):
        raise InvalidStateError("matrix is not Hermitian within tolerance")
    evals, evecs = np.linalg.eigh(hermitian_part(m))
    order = np.argsort(evals)[::-1]
    return SpectralDecomposition(evals[order].copy(), evecs[:, order].copy())


def matrix_sqrt(m) -> np.ndarray:
    """Positive-semidefinite square root of a PSD Hermitian matrix."""
    evals, evecs = hermitian_eigen(m)
    if evals.min() < -PSD_TOL:
        raise InvalidStateError(f"matrix_sqrt: negative eigenvalue {evals.min()}")
    root = np.sqrt(np.clip(evals, 0.0, None))
    return (evecs * root) @ evecs.conj().T


def pseudo_inverse(m) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a PSD Hermitian matrix.

    Eigenvalues above PINV_CUTOFF times the largest one are inverted,
    the rest are zeroed.
    """
    evals, evecs = hermitian_eigen(m)
    if evals.min() < -PSD_TOL:
        raise InvalidStateError(f"pseudo_inverse: negative eigenvalue {evals.min()}")
    cutoff = PINV_CUTOFF * max(evals.max(), 0.0)
    inv = np.where(evals > cutoff, 1.0 / np.where(evals > cutoff, evals, 1.0), 0.0)
    return (evecs * inv) @ evecs.conj().T


def psd_rank(m) -> int:
    """Numerical rank of a PSD matrix, with the same cutoff as pseudo_inverse."""
    evals = np.linalg.eigvalsh(hermitian_part(as_complex_matrix(m)))
    cutoff = PINV_CUTOFF * max(evals.max(), 0.0)
    return int(np.count_nonzero(evals > cutoff))
