"""Dispersion matrix and kernel of the characteristic system.

Fourier-transforming the half-space problem couples the two spectral
densities (momentum and energy moments of the wall correction) through a
2x2 linear system.  This module assembles its pieces at given
wavenumbers:

  * the dispersion matrix Lambda(k), whose determinant k^2*omega(k) has
    a double zero at the origin and, in this formulation, no other zeros
    on the positive axis (omega is a sum of positive moments);
  * the adjugate D(k) with Lambda*D = det(Lambda)*I;
  * the two source vectors multiplying the gradient amplitude and the
    jump coefficient;
  * the 2x2 kernel J(k, k1) of the wavenumber integral term.

Diagonal entries of Lambda are real and even in k, off-diagonal ones are
purely imaginary and odd; the two diagonal entries admit exact
rewritings 1 - (3/g1)T = (3k^2/g1)T' and 1 - (1/g2)T = (k^2/g2)T''
whose residuals are the module's self-verification probes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .moments import (
    DEFAULT_CONFIG,
    J_moment,
    MomentIndex,
    QuadratureConfig,
    T_moment,
    scalar_moments,
)
from .spectrum import SpectrumParams


def characteristic_indices(gamma: float) -> dict[str, MomentIndex]:
    """Moment indices of the characteristic system at this gamma.

    lam*  entries of the dispersion matrix
    id1/id2  exact rewritings of the two diagonal entries (the k^2
             companion moments; note id1 carries mu^4 and C^(gamma+6),
             forced by the mu^2*mu^2 and C^(gamma+4)*C^2 bookkeeping)
    src*  components of the two source vectors
    ker*  entries of the two-wavenumber kernel matrix
    """
    g = float(gamma)
    return {
        "lam11": MomentIndex(1, 0, 3 * g + 4, 2),
        "lam12": MomentIndex(1, 1, 2 * g + 4, 2),
        "lam21": MomentIndex(2, 1, 2 * g + 4, 2),
        "lam22": MomentIndex(0, 2, 3 * g + 2, 0),
        "id1": MomentIndex(3, 0, g + 6, 4),
        "id2": MomentIndex(2, 2, g + 4, 2),
        "src1_a": MomentIndex(1, 0, 2 * g + 4, 4),
        "src1_b": MomentIndex(0, 1, 3 * g + 2, 2),
        "src2_a": MomentIndex(1, 0, 2 * g + 5, 3),
        "src2_b": MomentIndex(0, 1, 3 * g + 3, 1),
        "ker11": MomentIndex(1, 0, 5 * g + 4, 3),
        "ker12": MomentIndex(1, 1, 4 * g + 4, 3),
        "ker21": MomentIndex(2, 1, 4 * g + 4, 3),
        "ker22": MomentIndex(0, 2, 5 * g + 2, 1),
    }


@dataclass(frozen=True)
class KernelBundle:
    """Dispersion matrix data evaluated at one wavenumber.

    lambda_mat and adjugate are complex 2x2 arrays, t1 and t2 complex
    2-vectors; omega is the real reduced dispersion function with
    det(Lambda) = k^2 * omega(k).
    """

    k: float
    lambda_mat: np.ndarray
    adjugate: np.ndarray
    omega: float
    t1: np.ndarray
    t2: np.ndarray

    @property
    def det_lambda(self) -> complex:
        m = self.lambda_mat
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]

    @property
    def dispersion_function(self) -> float:
        return self.k * self.k * self.omega


@dataclass(frozen=True)
class KernelMatrix:
    """2x2 kernel of the wavenumber integral term at (k, k1)."""

    k: float
    k1: float
    entries: np.ndarray


def omega(k: float, gamma: float, spectrum: SpectrumParams,
          config: QuadratureConfig | None = None) -> float:
    """Reduced dispersion function det(Lambda)/k^2, finite at k = 0.

    Assembled from the rewritten diagonal entries,

        omega = (3/(g1 g2)) * (k^2 * T_id1 * T_id2 + T_lam12 * T_lam21),

    a sum of positive moments, so it carries no cancellation at small k
    where the direct determinant loses digits.
    """
    config = config or DEFAULT_CONFIG
    sm = scalar_moments(gamma, spectrum, config)
    idx = characteristic_indices(gamma)
    t12 = T_moment(idx["lam12"], k, gamma, spectrum, config)
    t21 = T_moment(idx["lam21"], k, gamma, spectrum, config)
    cross = t12 * t21
    if k > 0.0:
        u1 = T_moment(idx["id1"], k, gamma, spectrum, config)
        u2 = T_moment(idx["id2"], k, gamma, spectrum, config)
        cross += k * k * u1 * u2
    return 3.0 * cross / (sm.g1 * sm.g2)


def source_vectors(k: float, gamma: float, spectrum: SpectrumParams,
                   config: QuadratureConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Source vectors multiplying the gradient amplitude and the jump.

    First components are purely imaginary (odd in k, vanishing at k = 0),
    second components real and negative.
    """
    config = config or DEFAULT_CONFIG
    idx = characteristic_indices(gamma)
    t1 = np.array([
        1j * k * T_moment(idx["src1_a"], k, gamma, spectrum, config),
        -T_moment(idx["src1_b"], k, gamma, spectrum, config),
    ])
    t2 = np.array([
        1j * k * T_moment(idx["src2_a"], k, gamma, spectrum, config),
        -T_moment(idx["src2_b"], k, gamma, spectrum, config),
    ])
    return t1, t2


def dispersion_matrix(k: float, gamma: float, spectrum: SpectrumParams,
                      config: QuadratureConfig | None = None) -> KernelBundle:
    """Assemble Lambda(k), its adjugate, omega(k) and the source vectors.

    At k = 0 every entry of Lambda vanishes identically (the diagonal
    moments reduce to g1/3 and g2 exactly), so the zero matrix is
    returned rather than a difference of separately integrated values.
    """
    config = config or DEFAULT_CONFIG
    sm = scalar_moments(gamma, spectrum, config)
    idx = characteristic_indices(gamma)
    if k == 0.0:
        lam = np.zeros((2, 2), dtype=complex)
    else:
        t11 = T_moment(idx["lam11"], k, gamma, spectrum, config)
        t12 = T_moment(idx["lam12"], k, gamma, spectrum, config)
        t21 = T_moment(idx["lam21"], k, gamma, spectrum, config)
        t22 = T_moment(idx["lam22"], k, gamma, spectrum, config)
        lam = np.array([
            [1.0 - 3.0 * t11 / sm.g1, 1j * k * t12 / sm.g2],
            [3j * k * t21 / sm.g1, 1.0 - t22 / sm.g2],
        ])
    adj = np.array([
        [lam[1, 1], -lam[0, 1]],
        [-lam[1, 0], lam[0, 0]],
    ])
    t1, t2 = source_vectors(k, gamma, spectrum, config)
    return KernelBundle(
        k=float(k),
        lambda_mat=lam,
        adjugate=adj,
        omega=omega(k, gamma, spectrum, config),
        t1=t1,
        t2=t2,
    )


def identity_residuals(k: float, gamma: float, spectrum: SpectrumParams,
                       config: QuadratureConfig | None = None) -> tuple[float, float]:
    """Residuals of the two exact diagonal rewritings, normalized.

    Each residual is (lhs - rhs)/max(|lhs|, 1) with lhs the subtracted
    diagonal form and rhs its k^2 companion moment.  Both sides are
    algebraic identities of the integrand decomposition, so any excess
    flags a quadrature or indexing bug.  The unit floor is the scale of
    the terms forming lhs: at high gamma with moderate w0 the
    subtraction cancels to ~1e-7 of its terms, below the quadrature
    error floor of any double-precision route, and dividing by that
    remnant would only amplify roundoff.
    """
    config = config or DEFAULT_CONFIG
    if k == 0.0:
        # both sides reduce to one and the same scalar moment
        return (0.0, 0.0)
    sm = scalar_moments(gamma, spectrum, config)
    idx = characteristic_indices(gamma)
    k2 = k * k

    lhs1 = 1.0 - 3.0 * T_moment(idx["lam11"], k, gamma, spectrum, config) / sm.g1
    rhs1 = 3.0 * k2 * T_moment(idx["id1"], k, gamma, spectrum, config) / sm.g1
    lhs2 = 1.0 - T_moment(idx["lam22"], k, gamma, spectrum, config) / sm.g2
    rhs2 = k2 * T_moment(idx["id2"], k, gamma, spectrum, config) / sm.g2

    r1 = (lhs1 - rhs1) / max(abs(lhs1), 1.0)
    r2 = (lhs2 - rhs2) / max(abs(lhs2), 1.0)
    return (r1, r2)


def kernel_matrix(k: float, k1: float, gamma: float, spectrum: SpectrumParams,
                  config: QuadratureConfig | None = None) -> KernelMatrix:
    """2x2 kernel of the wavenumber integral term.

    Diagonal entries are real, off-diagonal ones purely imaginary with
    an explicit factor of the outer wavenumber k.  At k1 = 0 every entry
    reduces to the matching single-pole moment with m lowered by
    2*gamma.
    """
    config = config or DEFAULT_CONFIG
    sm = scalar_moments(gamma, spectrum, config)
    idx = characteristic_indices(gamma)
    j11 = J_moment(idx["ker11"], k, k1, gamma, spectrum, config)
    j12 = J_moment(idx["ker12"], k, k1, gamma, spectrum, config)
    j21 = J_moment(idx["ker21"], k, k1, gamma, spectrum, config)
    j22 = J_moment(idx["ker22"], k, k1, gamma, spectrum, config)
    entries = np.array([
        [-3.0 * j11 / sm.g1, 1j * k * j12 / sm.g2],
        [3j * k * j21 / sm.g1, -j22 / sm.g2],
    ])
    return KernelMatrix(k=float(k), k1=float(k1), entries=entries)
