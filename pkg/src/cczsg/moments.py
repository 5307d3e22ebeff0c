"""Moments of complex random rows, quantiles, safety factors, samplers.

A complex random row M with mean mu, covariance Gamma = E[(M-mu)^H(M-mu)]
(Hermitian PSD) and pseudo-covariance J = E[(M-mu)^T(M-mu)] (symmetric)
is fully second-order described by the real composite covariance of the
pair (M_R, M_I),

    L = [[Gamma_R, Gamma_RI], [Gamma_IR, Gamma_I]],

with Gamma_R = Re(Gamma+J)/2, Gamma_I = Re(Gamma-J)/2,
Gamma_IR = Im(Gamma+J)/2 and Gamma_RI = Im(J-Gamma)/2.  The projection
Re(Mz) then has mean Re(mu z) and variance (z^H Gamma z + Re(z^T J z))/2.

The safety factor k_p is the scalar that multiplies the standard
deviation of the projection in the deterministic reformulation of
P[Re(Mz) <= m] >= p: a family quantile for exact elliptical families,
sqrt(p/(1-p)) for the moment-based ambiguity sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import special

from .complex_core import as_cmat, as_cvec
from .errors import DimensionMismatch, InconsistentMoments, POutOfRange

# Eigenvalue floor for "PSD within round-off".
PSD_TOL = 1e-9

# Variance round-off clamp: values in [-PSD_TOL, 0) are treated as 0.
_FAMILY_TAGS = ("gaussian", "laplace", "logistic", "cauchy", "student_t")


@dataclass(frozen=True)
class QuantileFamily:
    """Symmetric univariate family of the standardized projection."""

    tag: str
    nu: Optional[float] = None

    def __post_init__(self):
        if self.tag not in _FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")
        if self.tag == "student_t":
            if self.nu is None or not self.nu > 0:
                raise ValueError("student_t requires nu > 0")
        elif self.nu is not None:
            raise ValueError(f"family {self.tag!r} takes no nu parameter")


GAUSSIAN = QuantileFamily("gaussian")
LAPLACE = QuantileFamily("laplace")
LOGISTIC = QuantileFamily("logistic")
CAUCHY = QuantileFamily("cauchy")


def student_t(nu: float) -> QuantileFamily:
    return QuantileFamily("student_t", float(nu))


def _check_composite_bound(l_bound) -> Optional[np.ndarray]:
    if l_bound is None:
        return None
    arr = as_cmat(l_bound, symmetric=True)
    if np.max(np.abs(arr.imag)) > 0:
        raise InconsistentMoments("composite covariance bound must be real")
    if arr.shape[0] % 2 != 0:
        raise DimensionMismatch("composite covariance bound must be 2n x 2n")
    real = np.ascontiguousarray(arr.real)
    if float(np.linalg.eigvalsh((real + real.T) / 2).min()) < -PSD_TOL:
        raise InconsistentMoments("composite covariance bound is not PSD")
    real.setflags(write=False)
    return real


@dataclass(frozen=True)
class Ces:
    """Exact elliptical family: the standardized projection law is known."""

    family: QuantileFamily


@dataclass(frozen=True)
class KnownMoments:
    """All laws sharing the row's exact first and second moments."""


@dataclass(frozen=True, eq=False)
class UnknownSecondMoment:
    """Known mean, composite covariance only bounded above by l_bound.

    l_bound is a 2n x 2n PSD matrix; None means the row's own composite
    covariance is used as the bound.
    """

    l_bound: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "l_bound", _check_composite_bound(self.l_bound))


@dataclass(frozen=True, eq=False)
class UnknownMoments:
    """Mean in an ellipsoid of radius sqrt(zeta), covariance bounded above.

    The mean ellipsoid is shaped by the covariance bound itself, adding the
    term sqrt(zeta)*||Gamma_hat^{1/2} z|| to the reformulated constraint.
    """

    zeta: float
    l_bound: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.zeta >= 0:
            raise ValueError("zeta must be nonnegative")
        object.__setattr__(self, "zeta", float(self.zeta))
        object.__setattr__(self, "l_bound", _check_composite_bound(self.l_bound))


AmbiguityModel = Union[Ces, KnownMoments, UnknownSecondMoment, UnknownMoments]


def _composite_blocks(gamma: np.ndarray, jmat: np.ndarray) -> np.ndarray:
    # Block signs are pinned by the quadratic-form identity: the variance
    # of Re(Mz) is (z^H Gamma z + Re(z^T J z))/2, so the composite
    # cross-covariance carries -Im(Gamma), not +Im(Gamma).
    gr = 0.5 * (gamma + jmat).real
    gi = 0.5 * (gamma - jmat).real
    gir = 0.5 * (jmat - gamma).imag
    gri = 0.5 * (jmat + gamma).imag
    return np.block([[gr, gri], [gir, gi]])


@dataclass(frozen=True, eq=False)
class ComplexMoments:
    """Mean, covariance, pseudo-covariance of a complex random row."""

    mu: np.ndarray
    gamma: np.ndarray
    jmat: np.ndarray

    def __post_init__(self):
        mu = as_cvec(self.mu)
        gamma = as_cmat(self.gamma, hermitian=True)
        jmat = as_cmat(self.jmat, symmetric=True)
        n = mu.size
        if gamma.shape != (n, n) or jmat.shape != (n, n):
            raise DimensionMismatch(
                f"moment shapes disagree: mu {mu.shape}, gamma {gamma.shape}, j {jmat.shape}"
            )
        if float(np.linalg.eigvalsh(gamma).min()) < -PSD_TOL:
            raise InconsistentMoments("covariance has eigenvalue below -1e-9")
        comp = _composite_blocks(gamma, jmat)
        comp = (comp + comp.T) / 2
        if float(np.linalg.eigvalsh(comp).min()) < -PSD_TOL:
            raise InconsistentMoments("implied composite covariance is not PSD")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "jmat", jmat)

    @property
    def dim(self) -> int:
        return self.mu.size


def composite_from_complex(m: ComplexMoments) -> np.ndarray:
    """Real composite covariance of (M_R, M_I); raises if not PSD."""
    comp = _composite_blocks(m.gamma, m.jmat)
    comp = (comp + comp.T) / 2
    if float(np.linalg.eigvalsh(comp).min()) < -PSD_TOL:
        raise InconsistentMoments("implied composite covariance is not PSD")
    return comp


def complex_from_composite(l: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of composite_from_complex: composite blocks -> (Gamma, J)."""
    arr = np.asarray(l, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 != 0:
        raise DimensionMismatch(f"expected square even-dimension matrix, got {arr.shape}")
    n = arr.shape[0] // 2
    gr, gri = arr[:n, :n], arr[:n, n:]
    gir, gi = arr[n:, :n], arr[n:, n:]
    gamma = gr + gi + 1j * (gri - gir)
    jmat = gr - gi + 1j * (gir + gri)
    return gamma, jmat


def projection_moments(m: ComplexMoments, z) -> tuple[float, float]:
    """Mean and variance of the real projection Re(Mz).

    mean = Re(mu z) with the plain (bilinear) product, variance
    (z^H Gamma z + Re(z^T J z))/2 clamped at zero when round-off puts it
    within PSD_TOL below.
    """
    zv = np.asarray(z, dtype=np.complex128)
    if zv.shape != (m.dim,):
        raise DimensionMismatch(f"strategy shape {zv.shape} vs row dim {m.dim}")
    mean = float(np.real(m.mu @ zv))
    var = 0.5 * (np.real(zv.conj() @ m.gamma @ zv) + np.real(zv @ m.jmat @ zv))
    var = float(var)
    if var < 0:
        if var < -PSD_TOL:
            raise InconsistentMoments(f"projection variance {var} below -1e-9")
        var = 0.0
    return mean, var


def quantile(f: QuantileFamily, p: float) -> float:
    """Standard quantile of the family at level p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise POutOfRange(f"quantile needs p in (0, 1), got {p}")
    if f.tag == "gaussian":
        return float(special.ndtri(p))
    if f.tag == "laplace":
        return float(np.log(2 * p)) if p < 0.5 else float(-np.log(2 * (1 - p)))
    if f.tag == "logistic":
        return float(np.log(p / (1 - p)))
    if f.tag == "cauchy":
        return float(np.tan(np.pi * (p - 0.5)))
    return float(special.stdtrit(f.nu, p))


def safety_factor(model: AmbiguityModel, p: float) -> float:
    """Scalar k_p multiplying the projection standard deviation.

    Exact families need p in [0.5, 1) so the factor is nonnegative; the
    moment-based sets accept p in (0, 1) and use the one-sided Chebyshev
    factor sqrt(p/(1-p)).  For UnknownMoments the mean-ellipsoid term
    sqrt(zeta) is handled structurally by the caller; only the
    sqrt(p/(1-p)) part is returned here.
    """
    if isinstance(model, Ces):
        if not 0.5 <= p < 1.0:
            raise POutOfRange(f"exact-family level must satisfy 0.5 <= p < 1, got {p}")
        return quantile(model.family, p)
    if isinstance(model, (KnownMoments, UnknownSecondMoment, UnknownMoments)):
        if not 0.0 < p < 1.0:
            raise POutOfRange(f"robust level must satisfy 0 < p < 1, got {p}")
        return float(np.sqrt(p / (1 - p)))
    raise TypeError(f"unknown ambiguity model {model!r}")


def _standard_draws(f: QuantileFamily, rng: np.random.Generator, count: int) -> np.ndarray:
    if f.tag == "gaussian":
        return rng.standard_normal(count)
    if f.tag == "laplace":
        return rng.laplace(0.0, 1.0, count)
    if f.tag == "logistic":
        return rng.logistic(0.0, 1.0, count)
    if f.tag == "cauchy":
        return rng.standard_cauchy(count)
    return rng.standard_t(f.nu, count)


def sample_projection(f: QuantileFamily, mean: float, std: float, count: int, seed: int) -> np.ndarray:
    """i.i.d. draws of mean + std*X with X standard under the family."""
    if std < 0:
        raise ValueError("std must be nonnegative")
    rng = np.random.default_rng(seed)
    if std == 0:
        return np.full(count, float(mean))
    return mean + std * _standard_draws(f, rng, count)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    """Symmetric square root of a real PSD matrix, round-off clipped."""
    vals, vecs = np.linalg.eigh((mat + mat.T) / 2)
    if float(vals.min()) < -PSD_TOL:
        raise InconsistentMoments("matrix is not PSD")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def sample_gaussian_row(m: ComplexMoments, seed: int, count: Optional[int] = None) -> np.ndarray:
    """Complex Gaussian draw(s) of the row with moments m.

    Returns one row (shape n) when count is None, else a (count, n) array.
    Sampling goes through the composite covariance, so an improper J is
    honored exactly.
    """
    comp = composite_from_complex(m)
    root = _psd_sqrt(comp)
    rng = np.random.default_rng(seed)
    n = m.dim
    k = 1 if count is None else int(count)
    y = rng.standard_normal((k, 2 * n)) @ root.T
    rows = y[:, :n] + 1j * y[:, n:] + m.mu
    return rows[0] if count is None else rows
