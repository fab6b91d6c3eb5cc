"""Exception types raised by the numerical layers."""

from __future__ import annotations


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and the error bound reported by
    the integrator so callers can decide whether to retry or abort.
    """

    def __init__(self, message: str, estimate: float = float("nan"),
                 error_estimate: float = float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class DispersionDegeneracyError(RuntimeError):
    """The dispersion function lost positivity away from the origin.

    The jump solver assumes the determinant of the dispersion matrix has
    only its double zero at k = 0; a nonpositive omega(k) at a quadrature
    node invalidates the pole-elimination scheme, so we stop rather than
    return a silently wrong series.
    """


class OscillatoryIntegralError(RuntimeError):
    """A Fourier-type profile integral is under-resolved.

    Raised when the fixed spectral grid cannot resolve cos(kx)/sin(kx)
    oscillations at the requested depth x; far from the wall the
    Chapman-Enskog asymptote should be used instead of the transform.
    """
