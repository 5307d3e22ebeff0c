"""Complex vectors and matrices and their real embeddings.

A complex vector a = a_R + i a_I is embedded as the stacked real vector
phi1(a) = [a_R; a_I]; a complex matrix A as the block matrix
phi2(A) = [[A_R, -A_I], [A_I, A_R]].  Both maps are linear bijections and
satisfy phi1(A a) = phi2(A) phi1(a), phi2(A B) = phi2(A) phi2(B),
phi2(A^H) = phi2(A)^T, and norm preservation ||phi1(a)|| = ||a||, which is
what lets every complex program downstream be posed over real cones.

Vectors and matrices are plain numpy arrays of dtype complex128; the
validators below are the only constructors the rest of the package uses.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, ZeroVector

# Default absolute tolerance for algebraic identity checks.
DEFAULT_TOL = 1e-10

# Absolute tolerance for structural flags (Hermitian / symmetric input data).
STRUCT_TOL = 1e-12


def as_cvec(a) -> np.ndarray:
    """Validate and copy a 1-D complex vector."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected 1-D vector, got shape {arr.shape}")
    out = arr.copy()
    out.setflags(write=False)
    return out


def as_cmat(a, hermitian: bool = False, symmetric: bool = False) -> np.ndarray:
    """Validate and copy a 2-D complex matrix.

    The flags assert structure: within STRUCT_TOL (scaled by the largest
    entry) of A = A^H or A = A^T respectively.
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected 2-D matrix, got shape {arr.shape}")
    if hermitian or symmetric:
        if arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"structured matrix must be square, got {arr.shape}")
        scale = 1.0 + float(np.max(np.abs(arr))) if arr.size else 1.0
        if hermitian and np.max(np.abs(arr - arr.conj().T)) > STRUCT_TOL * scale:
            raise DimensionMismatch("matrix is not Hermitian within tolerance")
        if symmetric and np.max(np.abs(arr - arr.T)) > STRUCT_TOL * scale:
            raise DimensionMismatch("matrix is not symmetric within tolerance")
    out = arr.copy()
    out.setflags(write=False)
    return out


def embed_vec(a) -> np.ndarray:
    """phi1: complex n-vector -> real 2n-vector [Re a; Im a]."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected 1-D vector, got shape {arr.shape}")
    return np.concatenate([arr.real, arr.imag])


def lift_vec(x) -> np.ndarray:
    """Inverse of embed_vec: real 2n-vector -> complex n-vector."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size % 2 != 0:
        raise DimensionMismatch(f"expected even-length real vector, got shape {arr.shape}")
    n = arr.size // 2
    return arr[:n] + 1j * arr[n:]


def embed_mat(a) -> np.ndarray:
    """phi2: complex n x m matrix -> real 2n x 2m block matrix."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected 2-D matrix, got shape {arr.shape}")
    return np.block([[arr.real, -arr.imag], [arr.imag, arr.real]])


def lift_mat(x) -> np.ndarray:
    """Inverse of embed_mat on its image (reads the upper blocks)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] % 2 != 0 or arr.shape[1] % 2 != 0:
        raise DimensionMismatch(f"expected even-shaped real matrix, got {arr.shape}")
    n = arr.shape[0] // 2
    m = arr.shape[1] // 2
    return arr[:n, :m] + 1j * arr[n:, :m]


def herm_inner(a, b) -> complex:
    """Hermitian inner product a^H b; Re of it equals phi1(a).phi1(b)."""
    av = np.asarray(a, dtype=np.complex128)
    bv = np.asarray(b, dtype=np.complex128)
    if av.shape != bv.shape or av.ndim != 1:
        raise DimensionMismatch(f"shape mismatch {av.shape} vs {bv.shape}")
    return complex(np.vdot(av, bv))


def dual_norm_certificate(z) -> np.ndarray:
    """Unit vector u attaining sup_{||u||<=1} Re(z^H u) = ||z||.

    The supremum is attained at u = z / ||z||; a zero input has no
    maximizer and raises ZeroVector.
    """
    zv = np.asarray(z, dtype=np.complex128)
    if zv.ndim != 1:
        raise DimensionMismatch(f"expected 1-D vector, got shape {zv.shape}")
    nrm = float(np.linalg.norm(zv))
    if nrm == 0.0:
        raise ZeroVector("dual-norm certificate undefined for the zero vector")
    return zv / nrm
