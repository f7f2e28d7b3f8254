"""Cross-check of the analytic continuation through Jacobi theta integrals.

For Re s < 1 the energy admits the representation

    pi^(-s/2) Gamma(s/2) E(s, delta)
        = 2^-(s+1) { int_0^inf [theta(z, it) - 1] t^((-1-s)/2) dt + f(s) },

with z = 1/(1+delta) and f(s) given by two different integrals on
0 < Re s < 1 and Re s < 0.  This module evaluates those integrals by
adaptive quadrature and compares against the Hurwitz-combination path.
It is a validator only; nothing in the production evaluation routes
through here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import BranchBoundary, DomainError, PoleProximity, QuadratureFailure
from .lattice_energy import _fold_delta
from .zeta_kernel import DEFAULT_POLICY, PrecisionPolicy, _gamma_unchecked

__all__ = [
    "ThetaArgs",
    "jacobi_theta",
    "hurwitz_pair_via_theta",
    "energy_via_theta",
]

_SERIES_EPS = 1e-17
_DECAY_CUTOFF = 14.0  # exp(-pi t) < 1e-18 beyond here


@dataclass(frozen=True)
class ThetaArgs:
    """Phase z in (0,1) and modular parameter t > 0 of theta(z, it)."""

    z: float
    t: float

    def __post_init__(self) -> None:
        if not (0 < self.z < 1):
            raise DomainError(f"theta phase must lie in (0, 1), got {self.z}")
        if not (self.t > 0):
            raise DomainError(f"modular parameter must be positive, got {self.t}")


def jacobi_theta(z: float, t: float) -> float:
    """theta(z, it) = sum_n exp(-pi n^2 t) exp(2 pi i n z); real for real z.

    Direct series for t >= 1; the modular transform
    theta(z, it) = t^(-1/2) sum_m exp(-pi (m - z)^2 / t) for t < 1.
    """
    if not (t > 0):
        raise DomainError(f"modular parameter must be positive, got {t}")
    z = float(z)
    if t >= 1.0:
        total = 1.0
        n = 1
        while True:
            term = math.exp(-math.pi * n * n * t)
            if term < _SERIES_EPS:
                break
            total += 2.0 * term * math.cos(2.0 * math.pi * n * z)
            n += 1
        return total
    half_width = math.ceil(3.7 * math.sqrt(t)) + 1
    center = round(z)
    total = 0.0
    for m in range(center - half_width, center + half_width + 1):
        total += math.exp(-math.pi * (m - z) ** 2 / t)
    return total / math.sqrt(t)


# ---------------------------------------------------------------------------
# quadrature plumbing
# ---------------------------------------------------------------------------

def _quad_complex(func, lo: float, hi: float, tol: float) -> complex:
    value, err = quad(
        func, lo, hi, epsabs=tol, epsrel=1e-12, limit=400, complex_func=True
    )
    err_mag = abs(err)
    if err_mag > 100 * tol:
        raise QuadratureFailure(
            f"integral on [{lo}, {hi}] stalled at error estimate {err_mag:.3e}"
        )
    return value


def _theta_pair_integral(z: float, s: complex, tol: float) -> complex:
    """int_0^inf [theta(z, it) - 1] t^((-1-s)/2) dt for Re s < 1, z in (0,1).

    Split at t = 1.  The upper part decays like exp(-pi t) and is cut at
    t = 14.  The lower part is mapped by u = -ln t; past the point where
    theta itself is negligible the integrand is exactly -exp(-u (1-s)/2),
    which is appended analytically.
    """
    def upper(t: float) -> complex:
        return (jacobi_theta(z, t) - 1.0) * cmath.exp((-1 - s) / 2 * math.log(t))

    total = _quad_complex(upper, 1.0, _DECAY_CUTOFF, tol)

    d = min(z, 1.0 - z)
    u_max = max(6.0, math.log(60.0 / (math.pi * d * d)))
    c = (1 - s) / 2  # Re c > 0 on the valid half-plane

    def lower(u: float) -> complex:
        return (jacobi_theta(z, math.exp(-u)) - 1.0) * cmath.exp(-c * u)

    total += _quad_complex(lower, 0.0, u_max, tol)
    total += -cmath.exp(-c * u_max) / c  # analytic tail of the "-1" part
    return total


def hurwitz_pair_via_theta(
    alpha: complex, z: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> complex:
    """zeta(1-alpha, z) + zeta(1-alpha, 1-z) from the theta integral,

        pi^(-(1-alpha)/2) Gamma((1-alpha)/2) [pair] =
            int_0^inf [theta(z, it) - 1] t^(alpha/2) dt/t,

    valid for Re alpha > 0 and z not an integer.
    """
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise DomainError("the pair integral requires Re alpha > 0")
    if not (0 < z < 1):
        raise DomainError(f"theta phase must lie in (0, 1), got {z}")
    integral = _theta_pair_integral(z, 1 - alpha, policy.quadrature_tol * 1e-3)
    prefactor = cmath.exp(
        -(1 - alpha) / 2 * math.log(math.pi)
    ) * _gamma_unchecked((1 - alpha) / 2)
    return integral / prefactor


# ---------------------------------------------------------------------------
# the f(s) constant and the full energy representation
# ---------------------------------------------------------------------------

def _f_constant(s: complex, tol: float) -> complex:
    """The two-branch integral constant of the representation.

    0 < Re s < 1:  int [theta(0,it) - 1 - t^(-1/2)] t^(s/2 - 1) dt
    Re s < 0:      int [theta(0,it) - t^(-1/2)] t^(s/2 - 1) dt

    Power-law pieces of the integrands are integrated in closed form so
    the quadrature only ever sees exponentially decaying remainders.
    """
    def upper_theta(t: float) -> complex:
        return (jacobi_theta(0.0, t) - 1.0) * cmath.exp((s / 2 - 1) * math.log(t))

    upper = _quad_complex(upper_theta, 1.0, _DECAY_CUTOFF, tol)

    # modular remainder on (0, 1]: theta(0, it) = t^(-1/2) theta(0, i/t)
    def lower_remainder(u: float) -> float:
        eu = math.exp(u)
        acc = 0.0
        n = 1
        while True:
            term = math.exp(-math.pi * n * n * eu)
            if term < _SERIES_EPS:
                break
            acc += term
            n += 1
        return 2.0 * math.exp(0.5 * u) * acc

    if s.real > 0:
        # int_1^inf -t^((s-3)/2) dt = -2/(1-s)
        upper += -2.0 / (1 - s)

        def lower(u: float) -> complex:
            return (lower_remainder(u) - 1.0) * cmath.exp(-s / 2 * u)

        u_max = 5.0
        low = _quad_complex(lower, 0.0, u_max, tol)
        low += -cmath.exp(-s / 2 * u_max) * 2.0 / s  # tail of the "-1" part
        return upper + low

    # Re s < 0 branch
    upper += -2.0 / s - 2.0 / (1 - s)

    def lower(u: float) -> complex:
        return lower_remainder(u) * cmath.exp(-s / 2 * u)

    return upper + _quad_complex(lower, 0.0, 5.0, tol)


def energy_via_theta(
    s: complex, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> complex:
    """E(s, delta) computed entirely from theta integrals (Re s < 1).

    The strip |Re s| < 1e-3 around the branch boundary of f(s) is
    rejected, as are the Gamma(s/2) poles at s in {0, -2, -4, ...}.
    """
    s = complex(s)
    if s.real >= 1:
        raise DomainError("the theta representation requires Re s < 1")
    if abs(s.real) < 1e-3:
        raise BranchBoundary("Re s is on the branch boundary of the f(s) constant")
    if abs(s.imag) <= policy.pole_exclusion_radius:
        half = round(s.real / 2)
        if half <= 0 and abs(s - 2 * half) <= 2 * policy.pole_exclusion_radius:
            raise PoleProximity(f"Gamma(s/2) pole at s={2 * half}")
    d = _fold_delta(delta)
    z = 1.0 / (1.0 + d)
    tol = policy.quadrature_tol * 1e-3
    bracket = _theta_pair_integral(z, s, tol) + _f_constant(s, tol)
    prefactor = cmath.exp(s / 2 * math.log(math.pi)) / _gamma_unchecked(s / 2)
    return prefactor * bracket * cmath.exp(-(s + 1) * math.log(2.0))
