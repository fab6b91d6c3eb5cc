"""Adaptive quadrature engine for the weighted moment integrals.

Every quantity the transport solution needs reduces to integrals of the
form

    integral over C of  alpha^r * energy^s * C^m * g(C) * Phi(mu-part)

where the angular mu-part is one of

    T kernel:  1 / (C^{2*gamma} + k^2 mu^2 alpha^2 C^2)
    J kernel:  the product of two such factors with wavenumbers k, k1.

The mu integral over [0, 1] is done in closed form (`angular_factor` and
its two-pole companion), which collapses every moment to a 1-D integral
over C on (0, C_max].  C_max is chosen so the Bose weight underflows
beyond it (energy >= ~750 gives g < 1e-320), making the discarded tail
exactly zero at double precision.

The occupation-derivative weight g(C) multiplies every integrand here,
including the T family; the k = 0 reductions and the two-pole kernel
require it, and without it none of the integrals converge.

T and J evaluations are memoized on (index, wavenumbers, gamma,
spectrum, config); all evaluation functions are pure, so the caches are
safe to share between threads and are simply rebuilt per process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import quad

from .errors import QuadratureError
from .spectrum import SpectrumParams, bose_weight, energy, group_velocity

GAMMA_RANGE = (0.0, 20.0)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and grid policy for the moment integrals.

    Attributes
    ----------
    rel_tol, abs_tol : float
        Targets handed to the adaptive integrator; abs_tol is only a
        floor so the relative criterion always dominates.
    c_max_energy : float
        Cutoff rule for the C integral: C_max solves
        energy(C_max) = c_max_energy.  At the default 750 the Bose
        weight underflows, so truncation costs nothing.
    max_subdivisions : int
        Adaptive subdivision cap per integral.
    k_map_scale, k_nodes, k_nodes_max : float, int, int
        Parameters of the compactifying map k = scale*t/(1-t) used for
        integrals over k in [0, inf): Gauss-Legendre node count and the
        cap reached by automatic doubling.
    series_switch : float
        Below this B/A ratio the angular closed form switches to its
        power series; above it the arctan/log bases plus the upward
        recurrence are stable.
    degeneracy_switch : float
        Relative |B1 - B2| gap under which the two-pole angular factor
        uses the confluent (repeated-pole) form at the midpoint.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-300
    c_max_energy: float = 750.0
    max_subdivisions: int = 200
    k_map_scale: float = 1.0
    k_nodes: int = 128
    k_nodes_max: int = 1024
    series_switch: float = 0.5
    degeneracy_switch: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol <= 1e-4:
            raise ValueError(f"rel_tol must lie in (0, 1e-4], got {self.rel_tol}")
        if self.abs_tol <= 0.0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")
        if self.c_max_energy < 50.0:
            raise ValueError("c_max_energy below 50 truncates visible mass")
        if self.k_map_scale <= 0.0:
            raise ValueError("k_map_scale must be positive")
        if not 8 <= self.k_nodes <= self.k_nodes_max:
            raise ValueError("need 8 <= k_nodes <= k_nodes_max")
        if not 0.0 < self.series_switch < 1.0:
            raise ValueError("series_switch must lie in (0, 1)")
        if not 0.0 < self.degeneracy_switch < 1e-2:
            raise ValueError("degeneracy_switch must lie in (0, 1e-2)")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class MomentIndex:
    """Index tuple (r, s, m, n) of one weighted moment.

    r and s are the powers of alpha and of the energy, m the power of C
    and n the power of mu.  All indices used by the transport kernels
    have n between 0 and 6.
    """

    r: int
    s: int
    m: float
    n: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0:
            raise ValueError("alpha and energy powers must be >= 0")
        if not 0 <= self.n <= 6:
            raise ValueError(f"mu power n must lie in 0..6, got {self.n}")
        if not math.isfinite(self.m):
            raise ValueError("C power m must be finite")

    def small_c_exponent(self, gamma: float, spectrum: SpectrumParams,
                         wavenumbers: tuple[float, ...] = (0.0,)) -> float:
        """Effective power of C in the integrand as C -> 0.

        Near the origin alpha ~ w0/C, energy ~ w0*C and g ~ 1/(w0*C)^2
        on the phonon-like branches, while alpha ~ 1, energy ~ C^2/2 and
        g ~ 4/C^4 on the free branch.  A kernel pole at zero wavenumber
        is bounded below by C^{2*gamma} outright; a pole at positive
        wavenumber only costs C^{2*gamma} inside the layer mu less than
        C^gamma/(k*w0), and the mu^n weight suppresses up to (n+1)/2
        such layers, which is exactly why the high-n companion moments
        of the diagonal identities stay finite at every k > 0.
        """
        zero = sum(1 for k in wavenumbers if k == 0.0)
        pos = len(wavenumbers) - zero
        phonon_like = spectrum.mode != "free" and spectrum.w0 > 0.0
        if phonon_like:
            p0 = self.m + self.s - self.r - 2.0
            deficit = 2.0 * gamma * (zero + max(0.0, pos - 0.5 * (self.n + 1)))
        else:
            # quadratic branch: the positive-k pole scale is k*C, so each
            # unsuppressed layer costs the smaller of C^{2*gamma} and C^2
            p0 = self.m + 2.0 * self.s - 4.0
            deficit = 2.0 * gamma * (zero + pos)
            if gamma > 1.0:
                deficit -= (2.0 * gamma - 2.0) * min(pos, 0.5 * (self.n + 1))
        return p0 - deficit

    def check_integrable(self, gamma: float, spectrum: SpectrumParams,
                         wavenumbers: tuple[float, ...] = (0.0,)) -> None:
        p = self.small_c_exponent(gamma, spectrum, wavenumbers)
        if p <= -1.0:
            raise ValueError(
                f"moment {self} is not integrable at gamma={gamma}, "
                f"wavenumbers {wavenumbers} ({spectrum.mode}, w0={spectrum.w0}): "
                f"small-C exponent {p} <= -1"
            )


@dataclass(frozen=True)
class ScalarMoments:
    """The five C-only moments, tagged with what produced them.

    g1          integral of C^{gamma+4} alpha g
    g2          integral of C^{gamma+2} energy^2 g
    g_eps2      integral of energy C^{gamma+2} g
    g_eps3      integral of energy C^{gamma+3} g
    g_alpha_eps integral of alpha^2 energy C^4 g

    rel_error is the largest estimated relative quadrature error among
    the five.
    """

    g1: float
    g2: float
    g_eps2: float
    g_eps3: float
    g_alpha_eps: float
    gamma: float
    spectrum: SpectrumParams
    config: QuadratureConfig
    rel_error: float


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    lo, hi = GAMMA_RANGE
    if not math.isfinite(gamma) or not lo <= gamma <= hi:
        raise ValueError(f"collision exponent gamma must lie in [{lo}, {hi}], got {gamma}")
    return gamma


def _check_spectrum(spectrum: SpectrumParams) -> None:
    if spectrum.mode == "phonon" and spectrum.w0 == 0.0:
        raise ValueError("phonon spectrum with w0 = 0 has zero excitation energy")


def c_cutoff(spectrum: SpectrumParams, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Upper integration limit C_max with energy(C_max) = c_max_energy."""
    _check_spectrum(spectrum)
    cap = config.c_max_energy
    if spectrum.mode == "phonon":
        return cap / spectrum.w0
    if spectrum.mode == "free":
        return math.sqrt(2.0 * cap)
    w2 = spectrum.w0 * spectrum.w0
    # sqrt(w0^4+cap^2) - w0^2 written cancellation-free
    return math.sqrt(2.0) * cap / math.sqrt(math.hypot(w2, cap) + w2)


def _integrate(f, upper: float, config: QuadratureConfig, points=None) -> tuple[float, float]:
    """quad wrapper mapping non-convergence to QuadratureError."""
    res = quad(
        f,
        0.0,
        upper,
        epsabs=config.abs_tol,
        epsrel=config.rel_tol,
        limit=config.max_subdivisions,
        points=points,
        full_output=1,
    )
    value, abserr = res[0], res[1]
    if len(res) > 3:
        tol = max(config.abs_tol, config.rel_tol * abs(value))
        if not abserr <= 20.0 * tol:
            raise QuadratureError(
                f"C-integral did not converge: {res[3]} "
                f"(estimate {value:.6e}, error bound {abserr:.3e})",
                estimate=value,
                error_estimate=abserr,
            )
    return value, abserr


def _graded_points(c_max: float) -> tuple[float, ...]:
    # one early breakpoint absorbs the g ~ C^-2 weight near the origin
    return (min(1.0, 0.25 * c_max),)


def angular_factor(n: int, a: float, b: float,
                   series_switch: float = DEFAULT_CONFIG.series_switch) -> float:
    """Closed form of the mu integral over [0,1] of mu^n/(a + b mu^2).

    For b/a below ``series_switch`` the alternating power series

        (1/a) * sum_j (-b/a)^j / (n + 2j + 1)

    is summed to machine convergence; the arctan/log base cases with the
    upward recurrence I_n = 1/((n-1)b) - (a/b) I_{n-2} take over above
    the switch, where the recurrence no longer amplifies rounding.
    """
    if not isinstance(n, int) or not 0 <= n <= 6:
        raise ValueError(f"mu power n must be an integer in 0..6, got {n}")
    if not a > 0.0:
        raise ValueError(f"angular_factor needs a > 0, got {a}")
    if b < 0.0:
        raise ValueError(f"angular_factor needs b >= 0, got {b}")
    x = b / a
    if x < series_switch:
        return _phi_series(n, x) / a
    if x > 1e300:
        # near-overflow pole ratio: leading asymptotics, relative error
        # below 1/sqrt(x); reached only deep in the underflowing tail
        if n == 0:
            return 0.5 * math.pi / (math.sqrt(a) * math.sqrt(b))
        if n == 1:
            return (math.log(b) - math.log(a)) / (2.0 * b)
        return 1.0 / ((n - 1) * b)
    return _phi_exact(n, x) / a


def _phi_series(n: int, x: float) -> float:
    total = 1.0 / (n + 1)
    term = 1.0
    j = 0
    while True:
        j += 1
        term *= -x
        inc = term / (n + 2 * j + 1)
        total += inc
        if abs(inc) <= 1e-17 * abs(total):
            return total


def _phi_exact(n: int, x: float) -> float:
    # a * I_n as a function of x = b/a alone
    if n % 2 == 0:
        r = math.sqrt(x)
        phi = math.atan(r) / r
        start = 0
    else:
        phi = math.log1p(x) / (2.0 * x)
        start = 1
    for j in range(start + 2, n + 1, 2):
        phi = (1.0 / (j - 1) - phi) / x
    return phi


def _pair_series(n: int, x1: float, x2: float) -> float:
    # a^2 * M_n: product of the two geometric series, homogeneous sums
    # h_j = sum x1^i x2^(j-i) carry no cancellation.
    total = 1.0 / (n + 1)
    h = 1.0
    x2_pow = 1.0
    sign = 1.0
    j = 0
    while True:
        j += 1
        x2_pow *= x2
        h = x1 * h + x2_pow
        sign = -sign
        inc = sign * h / (n + 2 * j + 1)
        total += inc
        if abs(inc) <= 1e-17 * abs(total):
            return total


def _angular_pair(n: int, a: float, b1: float, b2: float,
                  config: QuadratureConfig) -> float:
    """mu integral over [0,1] of mu^n/((a + b1 mu^2)(a + b2 mu^2)).

    Branches: an exact log1p form for n = 1 (stable for any gap and any
    pole strength); the product power series when both poles are weak;
    the confluent repeated-pole form at the midpoint when b1 and b2
    nearly coincide; otherwise the divided-difference reduction

        M_n = (I_{n-2}(b2) - I_{n-2}(b1)) / (b1 - b2),  n >= 2,

    which shares all its stability with `angular_factor`.
    """
    if n == 1:
        d = b1 - b2
        if d == 0.0:
            return 1.0 / (2.0 * a * (a + b1))
        return math.log1p(d / (a + b2)) / (2.0 * a * d)
    x1 = b1 / a
    x2 = b2 / a
    sw = config.series_switch
    if max(x1, x2) < sw:
        return _pair_series(n, x1, x2) / (a * a)
    bmax = max(b1, b2)
    if abs(b1 - b2) <= config.degeneracy_switch * bmax:
        return _confluent(n, a, 0.5 * (b1 + b2), sw)
    if n >= 2:
        i2 = angular_factor(n - 2, a, b2, sw)
        i1 = angular_factor(n - 2, a, b1, sw)
        return (i2 - i1) / (b1 - b2)
    # n == 0
    t1 = math.sqrt(x1) * math.atan(math.sqrt(x1)) if math.isfinite(x1) \
        else 0.5 * math.pi * math.sqrt(x1)
    t2 = math.sqrt(x2) * math.atan(math.sqrt(x2)) if math.isfinite(x2) \
        else 0.5 * math.pi * math.sqrt(x2)
    return (t1 - t2) / (a * a * (x1 - x2))


def _confluent(n: int, a: float, b: float, series_switch: float) -> float:
    # mu integral of mu^n/(a + b mu^2)^2 by the recurrence
    # K_n = I_{n-2}/b - (a/b) K_{n-2}; reached only with b/a >= ~switch,
    # where the recurrence is stable.
    if b / a > 1e300:
        # leading asymptotics of the repeated strong pole
        if n == 0:
            return (0.25 * math.pi / (math.sqrt(a) * math.sqrt(b))) / a \
                + 0.5 / (a * (a + b))
        if n == 2:
            return 0.25 * math.pi / (math.sqrt(a) * b * math.sqrt(b))
        if n == 3:
            return (math.log(b) - math.log(a) - 1.0) / (2.0 * b * b)
        return 1.0 / ((n - 3) * b * b)
    k1 = 1.0 / (2.0 * a * (a + b))
    if n % 2 == 1:
        k = k1
        start = 1
    else:
        k = k1 + angular_factor(0, a, b, series_switch) / (2.0 * a)
        start = 0
    for j in range(start + 2, n + 1, 2):
        k = angular_factor(j - 2, a, b, series_switch) / b - (a / b) * k
    return k


def _moment_integrand(index: MomentIndex, gamma: float, spectrum: SpectrumParams,
                      config: QuadratureConfig, wavenumbers: tuple[float, ...]):
    r, s, m, n = index.r, index.s, index.m, index.n

    def f(c: float) -> float:
        gv = group_velocity(c, spectrum)
        al = gv / c
        num = (al ** r) * (energy(c, spectrum) ** s) * (c ** m) * bose_weight(c, spectrum)
        if num == 0.0:
            return 0.0
        a = c ** (2.0 * gamma)
        if a == 0.0:
            # the numerator underflows first for every integrable index
            return 0.0
        if len(wavenumbers) == 1:
            b = (wavenumbers[0] * gv) ** 2
            return num * angular_factor(n, a, b, config.series_switch)
        b1 = (wavenumbers[0] * gv) ** 2
        b2 = (wavenumbers[1] * gv) ** 2
        return num * _angular_pair(n, a, b1, b2, config)

    return f


def _check_k(k: float, name: str = "k") -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0.0:
        raise ValueError(f"wavenumber {name} must be finite and >= 0, got {k}")
    return k


@lru_cache(maxsize=None)
def _scalar_moments_cached(gamma: float, spectrum: SpectrumParams,
                           config: QuadratureConfig) -> ScalarMoments:
    c_max = c_cutoff(spectrum, config)
    pts = _graded_points(c_max)

    def run(weight) -> tuple[float, float]:
        return _integrate(weight, c_max, config, points=pts)

    def w_g1(c: float) -> float:
        return c ** (gamma + 3.0) * group_velocity(c, spectrum) * bose_weight(c, spectrum)

    def w_g2(c: float) -> float:
        return c ** (gamma + 2.0) * energy(c, spectrum) ** 2 * bose_weight(c, spectrum)

    def w_e2(c: float) -> float:
        return energy(c, spectrum) * c ** (gamma + 2.0) * bose_weight(c, spectrum)

    def w_e3(c: float) -> float:
        return energy(c, spectrum) * c ** (gamma + 3.0) * bose_weight(c, spectrum)

    def w_ae(c: float) -> float:
        gv = group_velocity(c, spectrum)
        return gv * gv * energy(c, spectrum) * c * c * bose_weight(c, spectrum)

    vals = {}
    worst = 0.0
    for name, w in (("g1", w_g1), ("g2", w_g2), ("g_eps2", w_e2),
                    ("g_eps3", w_e3), ("g_alpha_eps", w_ae)):
        v, err = run(w)
        vals[name] = v
        if v != 0.0:
            worst = max(worst, err / abs(v))
    return ScalarMoments(gamma=gamma, spectrum=spectrum, config=config,
                         rel_error=worst, **vals)


def scalar_moments(gamma: float, spectrum: SpectrumParams,
                   config: QuadratureConfig | None = None) -> ScalarMoments:
    """Evaluate the five C-only moments for one parameter set.

    Results are cached per (gamma, spectrum, config); all five come from
    the same adaptive rule, so their error estimates are comparable.
    """
    gamma = _check_gamma(gamma)
    _check_spectrum(spectrum)
    return _scalar_moments_cached(gamma, spectrum, config or DEFAULT_CONFIG)


@lru_cache(maxsize=None)
def _t_moment_cached(index: MomentIndex, k: float, gamma: float,
                     spectrum: SpectrumParams, config: QuadratureConfig) -> float:
    c_max = c_cutoff(spectrum, config)
    f = _moment_integrand(index, gamma, spectrum, config, (k,))
    value, _ = _integrate(f, c_max, config, points=_graded_points(c_max))
    return value


def T_moment(index: MomentIndex, k: float, gamma: float, spectrum: SpectrumParams,
             config: QuadratureConfig | None = None) -> float:
    """Single-pole moment at wavenumber k.

    At k = 0 the angular factor degenerates to 1/(n+1) exactly and the
    moment reduces to a plain weighted power integral.
    """
    gamma = _check_gamma(gamma)
    _check_spectrum(spectrum)
    k = _check_k(k)
    index.check_integrable(gamma, spectrum, (k,))
    return _t_moment_cached(index, k, gamma, spectrum, config or DEFAULT_CONFIG)


@lru_cache(maxsize=None)
def _j_moment_cached(index: MomentIndex, k: float, k1: float, gamma: float,
                     spectrum: SpectrumParams, config: QuadratureConfig) -> float:
    c_max = c_cutoff(spectrum, config)
    f = _moment_integrand(index, gamma, spectrum, config, (k, k1))
    value, _ = _integrate(f, c_max, config, points=_graded_points(c_max))
    return value


def J_moment(index: MomentIndex, k: float, k1: float, gamma: float,
             spectrum: SpectrumParams, config: QuadratureConfig | None = None) -> float:
    """Two-pole moment at wavenumbers (k, k1).

    Symmetric in its wavenumbers by construction: arguments are ordered
    before evaluation so both orders share one code path and one cache
    entry.  At k1 = 0 it reduces to T_moment with m lowered by 2*gamma.
    """
    gamma = _check_gamma(gamma)
    _check_spectrum(spectrum)
    k = _check_k(k)
    k1 = _check_k(k1, "k1")
    index.check_integrable(gamma, spectrum, (k, k1))
    lo, hi = (k, k1) if k <= k1 else (k1, k)
    return _j_moment_cached(index, lo, hi, gamma, spectrum, config or DEFAULT_CONFIG)


def clear_caches() -> None:
    """Drop all memoized moment values (mainly for cold-start timing)."""
    _scalar_moments_cached.cache_clear()
    _t_moment_cached.cache_clear()
    _j_moment_cached.cache_clear()
