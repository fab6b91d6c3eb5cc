"""Successive approximation for the temperature-jump series.

The specular-diffuse boundary problem is expanded in powers of (1 - q).
Each order m gives a 2x2 linear system

    Lambda(k) E^(m)(k) = rhs^(m)(k)

whose determinant k^2*omega(k) vanishes to second order at the origin;
the free coefficient eps_m of that order is fixed by demanding the
momentum density stay bounded there (pole elimination).  Order 0 has
rhs = T1 - eps0*T2 per unit gradient amplitude; order 1 adds the
wavenumber integral of the kernel against the order-0 densities and
subtracts eps1*T2.

All arithmetic below is done in the real reduced representation: the
momentum density enters as e1 = -i*E1 (real), the energy density as
e2 = E2, so the systems are real even though the matrix entries as
displayed are complex.  Coefficients returned here are per unit
gradient amplitude; the q dependence lives entirely in the closed-form
series prefactors of `assemble_epsT`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DispersionDegeneracyError, OscillatoryIntegralError, QuadratureError
from .kernel import characteristic_indices
from .moments import (
    DEFAULT_CONFIG,
    J_moment,
    MomentIndex,
    QuadratureConfig,
    T_moment,
    scalar_moments,
)
from .spectrum import SpectrumParams, alpha, energy

# relative change of eps1 at which grid doubling stops
EPS1_REFINE_TOL = 1e-6

# fraction of the non-oscillatory mass beyond which a profile transform
# is declared under-resolved
PROFILE_RESOLUTION_TOL = 0.05


@dataclass(frozen=True)
class KGrid:
    """Nodes and weights for integrals over k in [0, inf).

    Gauss-Legendre nodes on t in (0, 1) under the compactifying map
    k = scale*t/(1-t), with the Jacobian folded into the weights.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)


def build_k_grid(config: QuadratureConfig | None = None, n: int | None = None) -> KGrid:
    config = config or DEFAULT_CONFIG
    n = config.k_nodes if n is None else int(n)
    if n < 8:
        raise ValueError("k grid needs at least 8 nodes")
    x, w = np.polynomial.legendre.leggauss(n)
    t = 0.5 * (x + 1.0)
    wt = 0.5 * w
    s = config.k_map_scale
    nodes = s * t / (1.0 - t)
    weights = s * wt / (1.0 - t) ** 2
    return KGrid(nodes=nodes, weights=weights)


@dataclass(frozen=True)
class SpectralDensities:
    """Reduced spectral densities of one series order on a k grid.

    e1 is the real reduction -i*E1 of the momentum density (odd
    extension in k), e2 the energy density E2 (even extension).  When
    the grid carries quadrature weights the object is integration-ready
    for the wall-value and profile reconstructions.
    """

    k_grid: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    order: int
    weights: np.ndarray | None = None

    def require_weights(self) -> np.ndarray:
        if self.weights is None:
            raise ValueError("these densities carry no quadrature weights; "
                             "build them on a KGrid to integrate over k")
        return self.weights


@dataclass(frozen=True)
class SeriesSolution:
    """Assembled jump series for one parameter set and one q.

    eps_per_order holds the per-unit-amplitude coefficients (eps0, and
    eps1 when order >= 1); eps_T_per_Bplus is the closed-form series sum
    (1+q)/(1-q) * sum_m eps_m (1-q)^m at the stored q.
    """

    gamma: float
    spectrum: SpectrumParams
    q: float
    order: int
    eps_per_order: tuple[float, ...]
    eps_T_per_Bplus: float
    convergence_ratio: float
    densities: tuple[SpectralDensities, ...]


def eps0_per_Bplus(gamma: float, spectrum: SpectrumParams,
                   config: QuadratureConfig | None = None) -> float:
    """Zeroth jump coefficient per unit gradient amplitude.

    Pole elimination at order 0 pins it to 2*g_eps2/(3*g_eps3).
    """
    sm = scalar_moments(gamma, spectrum, config or DEFAULT_CONFIG)
    return 2.0 * sm.g_eps2 / (3.0 * sm.g_eps3)


def eps0_per_Bplus_via_tmoments(gamma: float, spectrum: SpectrumParams,
                                config: QuadratureConfig | None = None) -> float:
    """Same coefficient computed the long way, as the ratio of the two
    source-vector moments at k = 0; cross-validates the reduction."""
    config = config or DEFAULT_CONFIG
    idx = characteristic_indices(gamma)
    num = T_moment(idx["src1_b"], 0.0, gamma, spectrum, config)
    den = T_moment(idx["src2_b"], 0.0, gamma, spectrum, config)
    return num / den


def _omega_parts(k: float, gamma: float, spectrum: SpectrumParams,
                 config: QuadratureConfig) -> tuple[float, float, float, float, float]:
    """(t12, t21, u1, u2, omega) at one wavenumber; u1/u2 are 0 at k=0."""
    idx = characteristic_indices(gamma)
    sm = scalar_moments(gamma, spectrum, config)
    t12 = T_moment(idx["lam12"], k, gamma, spectrum, config)
    t21 = T_moment(idx["lam21"], k, gamma, spectrum, config)
    if k > 0.0:
        u1 = T_moment(idx["id1"], k, gamma, spectrum, config)
        u2 = T_moment(idx["id2"], k, gamma, spectrum, config)
    else:
        u1 = u2 = 0.0
    om = 3.0 * (k * k * u1 * u2 + t12 * t21) / (sm.g1 * sm.g2)
    if not om > 0.0:
        raise DispersionDegeneracyError(
            f"omega({k}) = {om} is not positive at gamma={gamma}, "
            f"{spectrum.mode}, w0={spectrum.w0}; the pole-elimination "
            "scheme assumes the dispersion function only vanishes at k = 0"
        )
    return t12, t21, u1, u2, om


def _solve_reduced(k: float, rho1: float, rho2: float, parts, sm) -> tuple[float, float]:
    """Invert the reduced real 2x2 system at one wavenumber k > 0."""
    t12, t21, u1, u2, om = parts
    e1 = (u2 * rho1 - t12 * rho2 / k) / (sm.g2 * om)
    e2 = 3.0 * (t21 * rho1 / k + u1 * rho2) / (sm.g1 * om)
    return e1, e2


def zeroth_densities(k_grid, gamma: float, spectrum: SpectrumParams,
                     config: QuadratureConfig | None = None,
                     weights=None) -> SpectralDensities:
    """Order-0 spectral densities per unit gradient amplitude.

    The right-hand side is T1 - eps0*T2 with eps0 already fixed, so the
    momentum density is bounded at the origin; its k = 0 value is the
    analytic limit 0, and the energy density takes its finite limit
    assembled from the k = 0 moments.
    """
    config = config or DEFAULT_CONFIG
    idx = characteristic_indices(gamma)
    sm = scalar_moments(gamma, spectrum, config)
    eps0 = eps0_per_Bplus(gamma, spectrum, config)
    ks = np.asarray(k_grid, dtype=float)
    e1 = np.empty_like(ks)
    e2 = np.empty_like(ks)
    for i, k in enumerate(ks):
        k = float(k)
        a = (T_moment(idx["src1_a"], k, gamma, spectrum, config)
             - eps0 * T_moment(idx["src2_a"], k, gamma, spectrum, config))
        parts = _omega_parts(k, gamma, spectrum, config)
        if k == 0.0:
            t12, t21, _, _, om = parts
            e1[i] = 0.0
            e2[i] = 3.0 * t21 * a / (sm.g1 * om)
            continue
        b = (T_moment(idx["src1_b"], k, gamma, spectrum, config)
             - eps0 * T_moment(idx["src2_b"], k, gamma, spectrum, config))
        e1[i], e2[i] = _solve_reduced(k, k * a, -b, parts, sm)
    w = None if weights is None else np.asarray(weights, dtype=float)
    return SpectralDensities(k_grid=ks, e1=e1, e2=e2, order=0, weights=w)


def _eps1_on_grid(gamma: float, spectrum: SpectrumParams, config: QuadratureConfig,
                  source: SpectralDensities) -> float:
    # boundedness of the order-1 momentum density at k = 0: only the
    # energy row of the kernel survives there, and it reduces to a
    # single-pole moment of the inner wavenumber.
    sm = scalar_moments(gamma, spectrum, config)
    reduced = MomentIndex(0, 2, 3.0 * float(gamma) + 2.0, 1)
    w = source.require_weights()
    total = 0.0
    for k1, wk, e2 in zip(source.k_grid, w, source.e2):
        total += wk * T_moment(reduced, float(k1), gamma, spectrum, config) * e2
    return 2.0 * total / (math.pi * sm.g2 * sm.g_eps3)


def eps1_per_Bplus(gamma: float, spectrum: SpectrumParams,
                   config: QuadratureConfig | None = None,
                   k_quad: KGrid | None = None) -> float:
    """First correction coefficient per unit gradient amplitude.

    Chosen so the order-1 momentum density stays bounded at k = 0.  The
    coefficient is independent of q (it multiplies (1-q) in the series)
    and of the amplitude.  With no grid supplied the compactified rule
    is doubled until the value is stable to EPS1_REFINE_TOL.
    """
    config = config or DEFAULT_CONFIG
    if k_quad is not None:
        dens0 = zeroth_densities(k_quad.nodes, gamma, spectrum, config,
                                 weights=k_quad.weights)
        return _eps1_on_grid(gamma, spectrum, config, dens0)
    value, _, _ = _eps1_refined(gamma, spectrum, config)
    return value


def _eps1_refined(gamma: float, spectrum: SpectrumParams,
                  config: QuadratureConfig) -> tuple[float, KGrid, SpectralDensities]:
    n = config.k_nodes
    prev = None
    while n <= config.k_nodes_max:
        grid = build_k_grid(config, n)
        dens0 = zeroth_densities(grid.nodes, gamma, spectrum, config,
                                 weights=grid.weights)
        value = _eps1_on_grid(gamma, spectrum, config, dens0)
        if prev is not None and abs(value - prev) <= EPS1_REFINE_TOL * max(abs(value), 1e-300):
            return value, grid, dens0
        prev = value
        n *= 2
    raise QuadratureError(
        f"eps1 did not stabilize to {EPS1_REFINE_TOL} within "
        f"{config.k_nodes_max} k nodes (last value {prev!r})",
        estimate=prev if prev is not None else float("nan"),
    )


def first_densities(k_grid, gamma: float, spectrum: SpectrumParams,
                    config: QuadratureConfig | None, eps1: float,
                    source: SpectralDensities) -> SpectralDensities:
    """Order-1 spectral densities per unit gradient amplitude.

    ``source`` must be integration-ready order-0 densities; they enter
    through the kernel integral over the inner wavenumber.  Requested
    wavenumbers must be positive: eps1 keeps the momentum density
    bounded at the origin, but the energy density generically keeps a
    simple pole there (the momentum row of the kernel integral does not
    vanish at k = 0, and the single free coefficient is already spent).
    """
    config = config or DEFAULT_CONFIG
    if source.order != 0:
        raise ValueError("first_densities needs order-0 source densities")
    w = source.require_weights()
    idx = characteristic_indices(gamma)
    sm = scalar_moments(gamma, spectrum, config)
    ks = np.asarray(k_grid, dtype=float)
    if np.any(ks <= 0.0):
        raise ValueError("order-1 densities are defined for k > 0 only; "
                         "the energy component has a simple pole at k = 0")
    e1 = np.empty_like(ks)
    e2 = np.empty_like(ks)
    for i, k in enumerate(ks):
        k = float(k)
        s11 = s12 = s21 = s22 = 0.0
        for k1, wk, f1, f2 in zip(source.k_grid, w, source.e1, source.e2):
            k1 = float(k1)
            s11 += wk * J_moment(idx["ker11"], k, k1, gamma, spectrum, config) * f1
            s12 += wk * J_moment(idx["ker12"], k, k1, gamma, spectrum, config) * f2
            s21 += wk * J_moment(idx["ker21"], k, k1, gamma, spectrum, config) * f1
            s22 += wk * J_moment(idx["ker22"], k, k1, gamma, spectrum, config) * f2
        rho1 = (-eps1 * k * T_moment(idx["src2_a"], k, gamma, spectrum, config)
                + (-3.0 * s11 / sm.g1 + k * s12 / sm.g2) / math.pi)
        rho2 = (eps1 * T_moment(idx["src2_b"], k, gamma, spectrum, config)
                + (-3.0 * k * s21 / sm.g1 - s22 / sm.g2) / math.pi)
        parts = _omega_parts(k, gamma, spectrum, config)
        e1[i], e2[i] = _solve_reduced(k, rho1, rho2, parts, sm)
    return SpectralDensities(k_grid=ks, e1=e1, e2=e2, order=1, weights=None)


def assemble_epsT(eps_per_order, q: float, b_plus: float = 1.0,
                  order: int | None = None) -> tuple[float, float]:
    """Sum the jump series at specularity q and amplitude b_plus.

    Returns (eps_T, convergence_ratio) with the ratio |eps1*(1-q)/eps0|
    (0 when truncated at order 0).  The prefactor (1+q)/(1-q) carries
    the whole q dependence; q = 1 means no heat exchange and the jump
    diverges, so q must lie in [0, 1).
    """
    eps = tuple(float(e) for e in eps_per_order)
    if not eps:
        raise ValueError("need at least the order-0 coefficient")
    if not 0.0 <= q < 1.0:
        raise ValueError(f"specularity q must lie in [0, 1), got {q}")
    if order is None:
        order = len(eps) - 1
    if not 0 <= order < len(eps):
        raise ValueError(f"order {order} not available from {len(eps) - 1} coefficients")
    one_minus = 1.0 - q
    total = 0.0
    for m in range(order, -1, -1):
        total = total * one_minus + eps[m]
    eps_t = (1.0 + q) / one_minus * total * b_plus
    ratio = 0.0
    if order >= 1 and eps[0] != 0.0:
        ratio = abs(eps[1] * one_minus / eps[0])
    return eps_t, ratio


def solve(gamma: float, spectrum: SpectrumParams,
          config: QuadratureConfig | None = None, order: int = 1,
          q: float = 0.0, include_first_density: bool = False) -> SeriesSolution:
    """Run the scheme through the requested order (0 or 1).

    Order-1 densities are only evaluated when asked for (they need the
    full kernel integral per wavenumber and are diagnostic, not part of
    the jump coefficient); when included they live on a compact grid.
    """
    config = config or DEFAULT_CONFIG
    if order not in (0, 1):
        raise ValueError("orders beyond 1 are not implemented; the recursion "
                         "is mechanical but out of scope here")
    eps0 = eps0_per_Bplus(gamma, spectrum, config)
    if order == 0:
        grid = build_k_grid(config)
        dens0 = zeroth_densities(grid.nodes, gamma, spectrum, config,
                                 weights=grid.weights)
        eps = (eps0,)
        densities = (dens0,)
    else:
        eps1, grid, dens0 = _eps1_refined(gamma, spectrum, config)
        eps = (eps0, eps1)
        densities = (dens0,)
        if include_first_density:
            probe = build_k_grid(config, 16)
            dens1 = first_densities(probe.nodes, gamma, spectrum, config,
                                    eps1, dens0)
            densities = (dens0, dens1)
    eps_t, ratio = assemble_epsT(eps, q, 1.0, order)
    return SeriesSolution(
        gamma=float(gamma),
        spectrum=spectrum,
        q=float(q),
        order=order,
        eps_per_order=eps,
        eps_T_per_Bplus=eps_t,
        convergence_ratio=ratio,
        densities=densities,
    )


def wall_distribution(mu: float, c: float, gamma: float, spectrum: SpectrumParams,
                      config: QuadratureConfig | None,
                      densities: SpectralDensities) -> float:
    """Wall value of the reduced distribution correction at (mu, C).

    Evaluates the boundary reconstruction

        (C^gamma/pi) * integral over k of
            [3 alpha C mu/(2 g1) e1 + energy/(2 g2) e2]
            / (C^(2(gamma-1)) + k^2 mu^2 alpha^2)

    on the density grid; linear in the densities.
    """
    config = config or DEFAULT_CONFIG
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"direction cosine mu must lie in (0, 1], got {mu}")
    if not c > 0.0:
        raise ValueError(f"momentum magnitude C must be positive, got {c}")
    w = densities.require_weights()
    sm = scalar_moments(gamma, spectrum, config)
    al = alpha(c, spectrum)
    en = energy(c, spectrum)
    num1 = 3.0 * al * c * mu / (2.0 * sm.g1)
    num2 = en / (2.0 * sm.g2)
    base = c ** (2.0 * (gamma - 1.0))
    osc = (mu * al) ** 2
    ks = densities.k_grid
    total = float(np.sum(w * (num1 * densities.e1 + num2 * densities.e2)
                         / (base + osc * ks * ks)))
    return (c ** gamma) / math.pi * total


def profiles(x_grid, gamma: float, spectrum: SpectrumParams,
             config: QuadratureConfig | None,
             densities: SpectralDensities) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spatial moment profiles and the temperature perturbation.

    Returns (W1, W2, dT_rel) on the requested depths, where

        W1(x) = (1/pi) integral of sin(kx) e1(k) dk
        W2(x) = (1/pi) integral of cos(kx) e2(k) dk

    and dT_rel = W2/(2 g2) is the relative temperature perturbation.
    Raises OscillatoryIntegralError when the density grid cannot resolve
    the oscillations at some requested depth; far from the wall the
    Chapman-Enskog asymptote applies and the transform is not needed.
    """
    config = config or DEFAULT_CONFIG
    w = densities.require_weights()
    sm = scalar_moments(gamma, spectrum, config)
    ks = densities.k_grid
    xs = np.asarray(x_grid, dtype=float)
    if np.any(xs < 0.0):
        raise ValueError("depths must be >= 0")
    amp1 = float(np.sum(w * np.abs(densities.e1))) / math.pi
    amp2 = float(np.sum(w * np.abs(densities.e2))) / math.pi
    w1 = np.empty_like(xs)
    w2 = np.empty_like(xs)
    for i, x in enumerate(xs):
        sin_f = np.sin(ks * x) * densities.e1
        cos_f = np.cos(ks * x) * densities.e2
        w1[i] = float(np.sum(w * sin_f)) / math.pi
        w2[i] = float(np.sum(w * cos_f)) / math.pi
        # embedded-rule cross-check: the trapezoid sum on the same nodes
        # only disagrees materially once the oscillation is unresolved
        t1 = float(np.trapz(sin_f, ks)) / math.pi
        t2 = float(np.trapz(cos_f, ks)) / math.pi
        bad1 = abs(w1[i] - t1) > PROFILE_RESOLUTION_TOL * (amp1 + abs(w1[i]))
        bad2 = abs(w2[i] - t2) > PROFILE_RESOLUTION_TOL * (amp2 + abs(w2[i]))
        if bad1 or bad2:
            raise OscillatoryIntegralError(
                f"profile transform under-resolved at depth x={x}; refine the "
                "k grid or use the Chapman-Enskog asymptote at this depth"
            )
    return w1, w2, w2 / (2.0 * sm.g2)
