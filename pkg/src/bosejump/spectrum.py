"""Dimensionless excitation spectrum of the condensed Bose gas.

Momenta are measured in thermal units, energies in units of k_B*T_s.
The general dispersion law interpolates between a linear (phonon) branch
with dimensionless sound speed w0 and a quadratic free-particle branch:

    energy(C)         = C*sqrt(w0^2 + C^2/4)
    group_velocity(C) = d energy/dC = (w0^2 + C^2/2)/sqrt(w0^2 + C^2/4)
    bose_weight(C)    = e^E/(e^E - 1)^2,  E = energy(C)

``mode`` selects the general law ("bogoliubov") or one of its two limits
("phonon": exactly w0*C, "free": exactly C^2/2).  The limits admit
closed-form moment integrals and anchor the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MODES = ("bogoliubov", "phonon", "free")


@dataclass(frozen=True)
class SpectrumParams:
    """Excitation-spectrum configuration.

    Attributes
    ----------
    mode : str
        One of "bogoliubov", "phonon", "free".
    w0 : float
        Dimensionless sound speed, >= 0.  Ignored by "free"; "bogoliubov"
        with w0 = 0 coincides with "free" identically.
    """

    mode: str = "bogoliubov"
    w0: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown spectrum mode {self.mode!r}; expected one of {MODES}")
        if not math.isfinite(self.w0) or self.w0 < 0.0:
            raise ValueError(f"w0 must be finite and >= 0, got {self.w0}")


def _check_c(c: float) -> float:
    c = float(c)
    if not math.isfinite(c) or c < 0.0:
        raise ValueError(f"momentum magnitude must be finite and >= 0, got {c}")
    return c


def energy(c: float, params: SpectrumParams) -> float:
    """Dimensionless excitation energy at momentum magnitude ``c``.

    Monotone increasing and >= 0 for every mode.  The general law is
    evaluated as C*sqrt(w0^2 + C^2/4), which is exact at C = 0 and free
    of cancellation.
    """
    c = _check_c(c)
    if params.mode == "phonon":
        return params.w0 * c
    if params.mode == "free":
        return 0.5 * c * c
    return c * math.sqrt(params.w0 * params.w0 + 0.25 * c * c)


def group_velocity(c: float, params: SpectrumParams) -> float:
    """Group velocity d energy/dC, i.e. the product alpha(C)*C.

    Finite for all C >= 0: the C -> 0 limit is w0 on the phonon-like
    branches and 0 on the free branch.  Use this instead of alpha() in
    integrands; the removable 1/C singularity never appears.
    """
    c = _check_c(c)
    if params.mode == "phonon":
        return params.w0
    if params.mode == "free":
        return c
    if c == 0.0:
        return params.w0
    w2 = params.w0 * params.w0
    return (w2 + 0.5 * c * c) / math.sqrt(w2 + 0.25 * c * c)


def alpha(c: float, params: SpectrumParams) -> float:
    """Velocity factor alpha(C) = group_velocity(C)/C, for C > 0 only.

    Raises
    ------
    ValueError
        If C = 0 while alpha diverges there (any phonon-like branch with
        w0 > 0); only the product alpha(C)*C stays finite at the origin.
    """
    c = _check_c(c)
    if c == 0.0:
        if params.mode == "free" or params.w0 == 0.0:
            return 1.0
        raise ValueError("alpha(C) diverges at C = 0; use group_velocity(C) = alpha*C")
    return group_velocity(c, params) / c


def bose_weight(c: float, params: SpectrumParams) -> float:
    """Equilibrium occupation derivative g(C) = e^E/(e^E - 1)^2.

    Evaluated as e^-E/(1 - e^-E)^2 with expm1, so it neither overflows
    for large energies (underflows cleanly to 0) nor loses digits for
    E << 1, where g ~ 1/E^2 - 1/12.
    """
    c = float(c)
    if not math.isfinite(c) or c <= 0.0:
        raise ValueError(f"bose_weight needs C > 0, got {c}")
    e = energy(c, params)
    if e <= 0.0:
        raise ValueError("bose_weight needs a positive excitation energy "
                         f"(energy({c}) = {e}); check spectrum parameters")
    em = math.exp(-e)
    if em == 0.0:
        return 0.0
    d = -math.expm1(-e)
    return em / (d * d)
