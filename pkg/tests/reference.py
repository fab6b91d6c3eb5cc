"""Independent reference oracles used to freeze expected values.

Everything in this module is deliberately built from primitives that the
library under test does not use: term-wise series summation for the
Riemann zeta factor, closed-form Gamma*zeta reductions for the limiting
spectra, and nested 1-D adaptive quadrature (no closed-form angular
reduction) for the wavenumber-dependent moments.
"""

from __future__ import annotations

import math

from scipy.integrate import quad


def zeta_series(s: float, terms: int = 400) -> float:
    """Riemann zeta for real s > 1 by direct term-wise summation.

    Sums n^-s for n <= N and closes the tail with the Euler-Maclaurin
    corrections N^(1-s)/(s-1) + N^-s/2 + s*N^-(s+1)/12 - ...; with
    N = 400 the truncation error is far below double precision for
    every exponent used here (s >= 2).
    """
    if s <= 1.0:
        raise ValueError("zeta series oracle needs s > 1")
    n = terms
    partial = sum(k ** (-s) for k in range(1, n + 1))
    tail = n ** (1.0 - s) / (s - 1.0) - 0.5 * n ** (-s)
    # Next Euler-Maclaurin corrections, Bernoulli numbers 1/6 and -1/30.
    tail += (s / 12.0) * n ** (-s - 1.0)
    tail -= (s * (s + 1.0) * (s + 2.0) / 720.0) * n ** (-s - 3.0)
    return partial + tail


def bose_power_integral(s: float) -> float:
    """Integral of x^s e^x/(e^x-1)^2 over (0, inf).

    Expanding e^x/(e^x-1)^2 = sum_{n>=1} n e^{-n x} termwise gives
    Gamma(s+1) * sum_{n>=1} n^{-s} = Gamma(s+1)*zeta(s).
    """
    return math.gamma(s + 1.0) * zeta_series(s)


def phonon_scalar_moments(gamma: float, w0: float) -> dict[str, float]:
    """Closed forms of the five weighted moments for a linear spectrum.

    With energy w0*C and group-velocity factor w0/C the substitution
    x = w0*C turns every moment into a bose_power_integral.
    """
    return {
        "g1": w0 ** (-(gamma + 3.0)) * bose_power_integral(gamma + 3.0),
        "g2": w0 ** (-(gamma + 3.0)) * bose_power_integral(gamma + 4.0),
        "g_eps2": w0 ** (-(gamma + 3.0)) * bose_power_integral(gamma + 3.0),
        "g_eps3": w0 ** (-(gamma + 4.0)) * bose_power_integral(gamma + 4.0),
        "g_alpha_eps": w0 ** (-1.0) * bose_power_integral(3.0),
    }


def free_scalar_moments(gamma: float) -> dict[str, float]:
    """Closed forms for the quadratic spectrum, via t = C^2/2."""

    def power_weight(a: float) -> float:
        # integral of C^a * g(C) dC with energy C^2/2
        return 2.0 ** ((a - 1.0) / 2.0) * bose_power_integral((a - 1.0) / 2.0)

    return {
        "g1": power_weight(gamma + 4.0),
        "g2": 0.25 * power_weight(gamma + 6.0),
        "g_eps2": 0.5 * power_weight(gamma + 4.0),
        "g_eps3": 0.5 * power_weight(gamma + 5.0),
        "g_alpha_eps": 0.5 * power_weight(6.0),
    }


def _energy(c: float, mode: str, w0: float) -> float:
    if mode == "phonon":
        return w0 * c
    if mode == "free":
        return 0.5 * c * c
    return c * math.sqrt(w0 * w0 + 0.25 * c * c)


def _alpha(c: float, mode: str, w0: float) -> float:
    if mode == "phonon":
        return w0 / c
    if mode == "free":
        return 1.0
    return (w0 * w0 + 0.5 * c * c) / (c * math.sqrt(w0 * w0 + 0.25 * c * c))


def _weight(c: float, mode: str, w0: float) -> float:
    e = _energy(c, mode, w0)
    em = math.exp(-e)
    if em == 0.0:
        return 0.0
    d = -math.expm1(-e)
    return em / (d * d)


def c_cutoff(mode: str, w0: float, energy_cap: float = 750.0) -> float:
    if mode == "phonon":
        return energy_cap / w0
    if mode == "free":
        return math.sqrt(2.0 * energy_cap)
    return math.sqrt(2.0 * (math.sqrt(w0 ** 4 + energy_cap ** 2) - w0 * w0))


def t_moment_2d(
    r: int,
    s: int,
    m: float,
    n: int,
    k: float,
    gamma: float,
    mode: str,
    w0: float,
) -> float:
    """Brute-force T moment: adaptive quadrature in mu nested inside C.

    Uses the raw double integrand with no angular closed form, so it is
    an independent check of the production reduction.
    """

    def outer(c: float) -> float:
        num = (_alpha(c, mode, w0) ** r) * (_energy(c, mode, w0) ** s)
        num *= c ** m * _weight(c, mode, w0)
        if num == 0.0:
            return 0.0
        a = c ** (2.0 * gamma)
        b = (k * _alpha(c, mode, w0) * c) ** 2

        def inner(mu: float) -> float:
            return mu ** n / (a + b * mu * mu)

        val, _ = quad(inner, 0.0, 1.0, epsabs=1e-300, epsrel=1e-12, limit=200)
        return num * val

    val, _ = quad(
        outer, 0.0, c_cutoff(mode, w0), epsabs=1e-300, epsrel=1e-10, limit=400
    )
    return val


def j_moment_2d(
    r: int,
    s: int,
    m: float,
    n: int,
    k: float,
    k1: float,
    gamma: float,
    mode: str,
    w0: float,
) -> float:
    """Brute-force J moment with the doubled denominator."""

    def outer(c: float) -> float:
        num = (_alpha(c, mode, w0) ** r) * (_energy(c, mode, w0) ** s)
        num *= c ** m * _weight(c, mode, w0)
        if num == 0.0:
            return 0.0
        a = c ** (2.0 * gamma)
        b1 = (k * _alpha(c, mode, w0) * c) ** 2
        b2 = (k1 * _alpha(c, mode, w0) * c) ** 2

        def inner(mu: float) -> float:
            u = mu * mu
            return mu ** n / ((a + b1 * u) * (a + b2 * u))

        val, _ = quad(inner, 0.0, 1.0, epsabs=1e-300, epsrel=1e-12, limit=200)
        return num * val

    val, _ = quad(
        outer, 0.0, c_cutoff(mode, w0), epsabs=1e-300, epsrel=1e-10, limit=400
    )
    return val


def angular_factor_quad(n: int, a: float, b: float) -> float:
    """Direct quadrature of mu^n/(a + b mu^2) on [0, 1].

    A breakpoint at the knee mu = sqrt(a/b) keeps the adaptive rule
    honest when the two scales are very different.
    """

    def f(mu: float) -> float:
        return mu ** n / (a + b * mu * mu)

    pts = None
    if b > a:
        knee = math.sqrt(a / b)
        pts = tuple(p for p in (0.1 * knee, knee, 10.0 * knee) if p < 1.0)
    val, _ = quad(f, 0.0, 1.0, epsabs=1e-300, epsrel=1e-13, limit=400, points=pts)
    return val
