"""Chance constraints as second-order cone data over the real embedding.

The probabilistic row P[Re(Mz) <= m] >= p becomes

    Re(mu z) + k_p * sqrt(z^H Gamma z + Re(z^T J z)) / sqrt(2) <= m,

and the variance is the real quadratic form x~^T K x~ of the embedded
strategy x~ = phi1(z), with

    K = [[Gamma_R, -Gamma_RI], [-Gamma_IR, Gamma_I]] = S L S,  S = diag(I, -I).

K is PSD exactly when the composite covariance L is, so K = Q^T Q and the
row is the cone ||k_p Q x~|| <= m - Re(mu z).  Under mean ambiguity an
extra cone sqrt(zeta) * ||Gamma_hat^{1/2} z|| shares the same budget.

The factor Q also drives the dual bookkeeping: splitting it into n x n
blocks Q1..Q4 and setting Qhat1 = Q1+Q4+i(Q3-Q2), Qhat2 = Q1-Q4+i(Q3+Q2)
gives the identity lambda~^T Q u~ = Re(lambda^H Qhat1 u + lambda^H Qhat2 conj(u)) / 2,
which is how the cone multiplier enters the stationarity equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .complex_core import embed_mat
from .errors import DimensionMismatch, NotPSD
from .moments import (
    AmbiguityModel,
    ComplexMoments,
    UnknownMoments,
    UnknownSecondMoment,
    _psd_sqrt,
    complex_from_composite,
    composite_from_complex,
    safety_factor,
)

# Below this Frobenius mass a covariance block is treated as exactly zero
# and the cone collapses to a linear row.
DEGENERATE_TOL = 1e-12

# Factorization acceptance: ||Q^T Q - K||_F <= FACTOR_TOL * (1 + ||K||_F).
FACTOR_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ChanceRow:
    """One probabilistic constraint row in unified <= orientation.

    rhs is the bound m and level the confidence p; validation delegates
    the p-range to the model's safety factor.
    """

    moments: ComplexMoments
    model: AmbiguityModel
    rhs: float
    level: float

    def __post_init__(self):
        object.__setattr__(self, "rhs", float(self.rhs))
        object.__setattr__(self, "level", float(self.level))
        safety_factor(self.model, self.level)  # raises POutOfRange
        if isinstance(self.model, (UnknownSecondMoment, UnknownMoments)):
            lb = self.model.l_bound
            if lb is not None and lb.shape[0] != 2 * self.moments.dim:
                raise DimensionMismatch(
                    f"covariance bound is {lb.shape[0]}x{lb.shape[0]}, "
                    f"row dimension needs {2 * self.moments.dim}"
                )

    @property
    def dim(self) -> int:
        return self.moments.dim


@dataclass(frozen=True, eq=False)
class SocData:
    """One cone ||F x~ + g|| <= h^T x~ + c over the embedded variable.

    deterministic_constraint may return several SocData sharing the same
    (h, c); the group then means sum_i ||F_i x~ + g_i|| <= h^T x~ + c.
    A zero-row F encodes the degenerate linear inequality 0 <= h^T x~ + c.
    """

    fmat: np.ndarray
    g: np.ndarray
    h: np.ndarray
    c: float

    def __post_init__(self):
        fmat = np.atleast_2d(np.asarray(self.fmat, dtype=np.float64))
        g = np.asarray(self.g, dtype=np.float64).reshape(-1)
        h = np.asarray(self.h, dtype=np.float64).reshape(-1)
        if fmat.size == 0:
            fmat = fmat.reshape(0, h.size)
        if fmat.shape != (g.size, h.size):
            raise DimensionMismatch(
                f"cone shapes disagree: F {fmat.shape}, g {g.shape}, h {h.shape}"
            )
        for arr in (fmat, g, h):
            arr.setflags(write=False)
        object.__setattr__(self, "fmat", fmat)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "c", float(self.c))

    def margin(self, x_embedded: np.ndarray) -> float:
        """Budget minus norm at a point; negative means violated."""
        lhs = float(np.linalg.norm(self.fmat @ x_embedded + self.g))
        return float(self.h @ x_embedded + self.c) - lhs


def group_margin(cones: tuple[SocData, ...], x_embedded: np.ndarray) -> float:
    """Shared-budget margin: h^T x + c minus the sum of cone norms."""
    total = 0.0
    for cone in cones:
        total += float(np.linalg.norm(cone.fmat @ x_embedded + cone.g))
    lead = cones[0]
    return float(lead.h @ x_embedded + lead.c) - total


@dataclass(frozen=True, eq=False)
class CouplingMatrices:
    qhat1: np.ndarray
    qhat2: np.ndarray


def k_matrix(m: ComplexMoments) -> np.ndarray:
    """Real PSD matrix with x~^T K x~ = (z^H Gamma z + Re(z^T J z))/2."""
    comp = composite_from_complex(m)
    return _k_from_composite(comp)


def _k_from_composite(comp: np.ndarray) -> np.ndarray:
    n = comp.shape[0] // 2
    sign = np.ones(2 * n)
    sign[n:] = -1.0
    k = comp * np.outer(sign, sign)
    return (k + k.T) / 2


def factor_psd(k: np.ndarray) -> np.ndarray:
    """Factor a symmetric PSD matrix as K = Q^T Q.

    Cholesky when positive definite; otherwise an eigendecomposition with
    eigenvalues clipped at zero (round-off down to -1e-9 tolerated).
    """
    arr = np.asarray(k, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {arr.shape}")
    scale = 1.0 + float(np.linalg.norm(arr))
    if float(np.max(np.abs(arr - arr.T))) > 1e-9 * scale:
        raise NotPSD("matrix is not symmetric")
    sym = (arr + arr.T) / 2
    try:
        q = np.linalg.cholesky(sym).T
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(sym)
        if float(vals.min()) < -1e-9:
            raise NotPSD(f"minimum eigenvalue {vals.min():.3e} below -1e-9")
        vals = np.clip(vals, 0.0, None)
        q = (np.sqrt(vals)[:, None]) * vecs.T
    resid = float(np.linalg.norm(q.T @ q - sym))
    if resid > FACTOR_TOL * (1.0 + float(np.linalg.norm(sym))):
        raise NotPSD(f"factor residual {resid:.3e} exceeds tolerance")
    return q


def coupling_from_factor(q: np.ndarray) -> CouplingMatrices:
    """Complex coupling pair (Qhat1, Qhat2) from a 2n x 2n real factor."""
    arr = np.asarray(q, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 != 0:
        raise DimensionMismatch(f"expected square even-dimension factor, got {arr.shape}")
    n = arr.shape[0] // 2
    q1, q2 = arr[:n, :n], arr[:n, n:]
    q3, q4 = arr[n:, :n], arr[n:, n:]
    qhat1 = q1 + q4 + 1j * (q3 - q2)
    qhat2 = q1 - q4 + 1j * (q3 + q2)
    return CouplingMatrices(qhat1=qhat1, qhat2=qhat2)


def mean_functional(mu: np.ndarray) -> np.ndarray:
    """Embedded coefficients of z -> Re(mu z): [Re mu; -Im mu]."""
    mu = np.asarray(mu, dtype=np.complex128)
    return np.concatenate([mu.real, -mu.imag])


def effective_k_and_gamma(row: ChanceRow) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Variance matrix K and (for mean ambiguity) the covariance shape.

    When the model carries an explicit composite bound the K matrix and
    the mean-ellipsoid shape Gamma_hat both come from the bound instead
    of the row's own moments.
    """
    model = row.model
    if isinstance(model, (UnknownSecondMoment, UnknownMoments)) and model.l_bound is not None:
        k = _k_from_composite(model.l_bound)
        gamma_hat, _ = complex_from_composite(model.l_bound)
    else:
        k = k_matrix(row.moments)
        gamma_hat = row.moments.gamma
    if isinstance(model, UnknownMoments):
        return k, gamma_hat
    return k, None


def deterministic_constraint(row: ChanceRow) -> tuple[SocData, ...]:
    """Deterministic cone data equivalent to the chance row.

    Returns one cone for single-term models and two budget-sharing cones
    when the mean lives in an ellipsoid.  Zero-variance terms collapse to
    a linear row (zero-row F) rather than a degenerate cone.
    """
    n = row.dim
    kp = safety_factor(row.model, row.level)
    h = -mean_functional(row.moments.mu)
    c = row.rhs

    k, gamma_hat = effective_k_and_gamma(row)
    cones: list[SocData] = []
    empty = np.zeros((0, 2 * n))

    if kp > DEGENERATE_TOL and float(np.linalg.norm(k)) > DEGENERATE_TOL:
        q = factor_psd(k)
        cones.append(SocData(fmat=kp * q, g=np.zeros(2 * n), h=h, c=c))

    if isinstance(row.model, UnknownMoments) and row.model.zeta > 0 and gamma_hat is not None:
        if float(np.linalg.norm(gamma_hat)) > DEGENERATE_TOL:
            ghalf = _psd_sqrt(embed_mat(gamma_hat))
            sz = float(np.sqrt(row.model.zeta))
            cones.append(SocData(fmat=sz * ghalf, g=np.zeros(2 * n), h=h, c=c))

    if not cones:
        cones.append(SocData(fmat=empty, g=np.zeros(0), h=h, c=c))
    return tuple(cones)
