"""Riesz energy of the alternating one-dimensional lattice.

The unit-density configuration with alternating nearest-neighbour gaps
2/(1+delta) and 2*delta/(1+delta) has energy per point

    E(s, delta) = 2^-s zeta(s)
                  + 2^-(s+1) [ zeta(s, 1/(1+delta)) + zeta(s, delta/(1+delta)) ],

analytic on C minus {1}.  This module provides that combination, the raw
double lattice sum as an independent oracle, the closed factorized forms
at delta in {1/5, 1/3, 1/2, 1}, and the small-anisotropy Taylor expansion
around delta = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleProximity
from .zeta_kernel import (
    DEFAULT_POLICY,
    PrecisionPolicy,
    _em_batch,
    _em_length,
    _hurwitz,
    _riemann,
)

__all__ = [
    "LatticeParams",
    "TaylorExpansion",
    "energy",
    "energy_ds",
    "energy_with_error",
    "energy_direct_sum",
    "energy_direct_sum_with_error",
    "energy_factorized",
    "taylor_energy",
    "taylor_expansion",
]

_LN2 = math.log(2.0)


def _fold_delta(delta: float) -> float:
    if not (delta > 0):
        raise DomainError(f"lattice parameter must be positive, got {delta}")
    return 1.0 / delta if delta > 1.0 else float(delta)


@dataclass(frozen=True)
class LatticeParams:
    """Geometry derived from the anisotropy parameter delta in (0, 1]."""

    delta: float
    spacing_long: float
    spacing_short: float
    shift: float       # z = 1/(1+delta), in [1/2, 1)
    epsilon: float     # 1 - delta

    @classmethod
    def from_delta(cls, delta: float) -> "LatticeParams":
        d = _fold_delta(delta)
        return cls(
            delta=d,
            spacing_long=2.0 / (1.0 + d),
            spacing_short=2.0 * d / (1.0 + d),
            shift=1.0 / (1.0 + d),
            epsilon=1.0 - d,
        )

    def __post_init__(self) -> None:
        if not (0 < self.delta <= 1):
            raise DomainError(f"delta must lie in (0, 1], got {self.delta}")


# ---------------------------------------------------------------------------
# Hurwitz-combination evaluation (the production path)
# ---------------------------------------------------------------------------

def _energy_terms(s: complex, delta: float, policy: PrecisionPolicy, want_ds: bool):
    """The three weighted zeta terms of E and, optionally, their s-derivatives."""
    params = LatticeParams.from_delta(delta)
    s = complex(s)
    z = params.shift
    w0 = cmath.exp(-s * _LN2)          # 2^-s
    w1 = 0.5 * w0                      # 2^-(s+1)
    zr, dzr, er = _riemann(s, policy, want_ds)
    za, dza, ea = _hurwitz(s, z, policy, want_ds)
    zb, dzb, eb = _hurwitz(s, 1.0 - z, policy, want_ds)
    terms = (w0 * zr, w1 * za, w1 * zb)
    value = terms[0] + terms[1] + terms[2]
    err = abs(w0) * er + abs(w1) * (ea + eb) + max(abs(t) for t in terms) * 2e-16
    if not want_ds:
        return value, 0j, err, terms
    dvalue = (
        w0 * (dzr - _LN2 * zr)
        + w1 * (dza - _LN2 * za)
        + w1 * (dzb - _LN2 * zb)
    )
    return value, dvalue, err, terms


def energy(s: complex, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """E(s, delta), analytic continuation on C minus {1}; E(s, 1) = zeta(s)."""
    value, _, _, _ = _energy_terms(s, delta, policy, want_ds=False)
    return value


def energy_ds(s: complex, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """dE/ds, term-wise; used by Newton refinement and the winding integrand."""
    _, dvalue, _, _ = _energy_terms(s, delta, policy, want_ds=True)
    return dvalue


def energy_with_error(
    s: complex, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> tuple[complex, float]:
    """E(s, delta) together with an evaluation error estimate."""
    value, _, err, _ = _energy_terms(s, delta, policy, want_ds=False)
    return value, err


def _energy_value_scale(s: complex, delta: float, policy: PrecisionPolicy) -> float:
    """Magnitude of the largest term in E; the binary64 residual floor scale."""
    _, _, _, terms = _energy_terms(s, delta, policy, want_ds=False)
    return max(abs(t) for t in terms)


def _energy_pair(s: complex, delta: float, policy: PrecisionPolicy):
    """(E, dE/ds, term scale) in one pass for Newton iterations."""
    value, dvalue, _, terms = _energy_terms(s, delta, policy, want_ds=True)
    return value, dvalue, max(abs(t) for t in terms)


def _energy_batch(points: np.ndarray, delta: float, policy: PrecisionPolicy) -> np.ndarray:
    """Vectorized E over contour points; requires min Re >= -2 (caller checks)."""
    params = LatticeParams.from_delta(delta)
    pts = np.asarray(points, dtype=np.complex128)
    n_terms = _em_length(complex(0, float(np.abs(pts.imag).max())), policy.em_direct_terms)
    j_terms = policy.em_bernoulli_terms
    z = params.shift
    w0 = np.exp(-pts * _LN2)
    zr = _em_batch(pts, 1.0, n_terms, j_terms)
    za = _em_batch(pts, z, n_terms, j_terms)
    zb = _em_batch(pts, 1.0 - z, n_terms, j_terms)
    return w0 * zr + 0.5 * w0 * (za + zb)


# ---------------------------------------------------------------------------
# Direct lattice sum (independent oracle, Re s > 1 only)
# ---------------------------------------------------------------------------

def energy_direct_sum_with_error(
    s: complex, delta: float, cutoff: int = 10**6
) -> tuple[complex, float]:
    """Raw double sum over the alternating lattice plus integral tail.

    Truncates each sublattice pairing at |p| <= 2*cutoff, appends the
    midpoint-rule tail integral, and returns (value, tail error bound).
    """
    s = complex(s)
    if s.real <= 1:
        raise DomainError("the lattice sum converges only for Re s > 1")
    if cutoff < 10**3:
        raise DomainError("cutoff below 10^3 gives a meaningless tail bound")
    d = _fold_delta(delta)
    b = 2.0 * d / (1.0 + d)

    n = np.arange(1, cutoff + 1, dtype=np.float64)

    def _series(offset: float) -> complex:
        return complex(np.exp(-s * np.log(2.0 * n + offset)).sum())

    total = _series(0.0) + 0.5 * (_series(b) + _series(-b))
    total += 0.5 * cmath.exp(-s * math.log(b))  # n = 0 term of the +b sublattice

    # midpoint tail: sum_{n>N} f(n) ~ int_{N+1/2} f, f(x) = (2x+c)^-s
    edge = cutoff + 0.5
    tail = 0j
    err = 0.0
    for c, weight in ((0.0, 1.0), (b, 0.5), (-b, 0.5)):
        base = 2.0 * edge + c
        tail += weight * cmath.exp((1 - s) * math.log(base)) / (2.0 * (s - 1))
        # midpoint-rule error <= |f'(N+1/2)| / 24 per pairing
        err += weight * abs(s) * 2.0 * base ** (-s.real - 1) / 24.0
    return total + tail, err


def energy_direct_sum(s: complex, delta: float, cutoff: int = 10**6) -> complex:
    """Tail-corrected direct sum; see energy_direct_sum_with_error."""
    value, _ = energy_direct_sum_with_error(s, delta, cutoff)
    return value


# ---------------------------------------------------------------------------
# Closed factorized forms
# ---------------------------------------------------------------------------

def energy_factorized(
    s: complex, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> complex:
    """Closed form f_delta(s) * zeta(s) for delta in {1/5, 1/3, 1/2, 1}:

        E(s, 1)   = zeta(s)
        E(s, 1/2) = 2^-(s+1) (1 + 3^s) zeta(s)
        E(s, 1/3) = 2^-(s+1) (2 - 2^s + 4^s) zeta(s)
        E(s, 1/5) = 2^-(s+1) (3 - 2^s - 3^s + 6^s) zeta(s)
    """
    s = complex(s)
    d = _fold_delta(delta)
    zeta_s, _, _ = _riemann(s, policy, want_ds=False)
    if abs(d - 1.0) < 1e-12:
        return zeta_s
    half_pref = cmath.exp(-(s + 1) * _LN2)
    if abs(d - 0.5) < 1e-12:
        factor = 1.0 + cmath.exp(s * math.log(3.0))
    elif abs(d - 1.0 / 3.0) < 1e-12:
        factor = 2.0 - cmath.exp(s * _LN2) + cmath.exp(s * math.log(4.0))
    elif abs(d - 0.2) < 1e-12:
        factor = (
            3.0
            - cmath.exp(s * _LN2)
            - cmath.exp(s * math.log(3.0))
            + cmath.exp(s * math.log(6.0))
        )
    else:
        raise DomainError(f"no factorized form for delta={delta}")
    return half_pref * factor * zeta_s


# ---------------------------------------------------------------------------
# Anisotropy expansion around delta = 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TaylorExpansion:
    """Truncated expansion of E(s, 1-eps) through eps^5.

    The eps^2 and eps^3 coefficients coincide: both are the zeta(2+s)
    block alone.  eps^4 and eps^5 mix in the zeta(4+s) block.
    """

    s: complex
    coeff_eps2: complex
    coeff_eps3: complex
    coeff_eps4: complex
    coeff_eps5: complex
    zeta_s: complex
    zeta_s_plus_2: complex
    zeta_s_plus_4: complex

    def value(self, epsilon: float) -> complex:
        e = float(epsilon)
        return (
            self.zeta_s
            + self.coeff_eps2 * e**2
            + self.coeff_eps3 * e**3
            + self.coeff_eps4 * e**4
            + self.coeff_eps5 * e**5
        )


def taylor_expansion(
    s: complex, policy: PrecisionPolicy = DEFAULT_POLICY
) -> TaylorExpansion:
    """Coefficients of the eps-expansion at fixed s (poles of s, s+2, s+4 excluded)."""
    s = complex(s)
    for shifted, origin in ((s, "s"), (s + 2, "s+2"), (s + 4, "s+4")):
        if abs(shifted - 1) <= policy.pole_exclusion_radius:
            raise PoleProximity(f"{origin} is inside the exclusion disk around 1")
    zeta_s, _, _ = _riemann(s, policy, want_ds=False)
    zeta_s2, _, _ = _riemann(s + 2, policy, want_ds=False)
    zeta_s4, _, _ = _riemann(s + 4, policy, want_ds=False)
    block2 = (
        (cmath.exp((2 + s) * _LN2) - 1.0)
        / cmath.exp((5 + s) * _LN2)
        * s
        * (1 + s)
        * zeta_s2
    )
    block4 = (
        (cmath.exp((4 + s) * _LN2) - 1.0)
        / cmath.exp((11 + s) * _LN2)
        / 3.0
        * s
        * (1 + s)
        * (2 + s)
        * (3 + s)
        * zeta_s4
    )
    return TaylorExpansion(
        s=s,
        coeff_eps2=block2,
        coeff_eps3=block2,
        coeff_eps4=0.75 * block2 + block4,
        coeff_eps5=0.5 * block2 + 2.0 * block4,
        zeta_s=zeta_s,
        zeta_s_plus_2=zeta_s2,
        zeta_s_plus_4=zeta_s4,
    )


def taylor_energy(
    s: complex, epsilon: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> complex:
    """E(s, 1-eps) truncated at eps^5, in the grouped form

        zeta(s) + block2 (e^2 + e^3 + 3/4 e^4 + 1/2 e^5) + block4 (e^4 + 2 e^5).
    """
    if not (0 <= epsilon < 1):
        raise DomainError(f"anisotropy must lie in [0, 1), got {epsilon}")
    exp_ = taylor_expansion(s, policy)
    e = float(epsilon)
    return (
        exp_.zeta_s
        + exp_.coeff_eps2 * (e**2 + e**3 + 0.75 * e**4 + 0.5 * e**5)
        + (exp_.coeff_eps4 - 0.75 * exp_.coeff_eps2) * (e**4 + 2.0 * e**5)
    )
