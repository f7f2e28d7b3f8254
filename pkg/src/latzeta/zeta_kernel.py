"""Complex Riemann/Hurwitz zeta kernel with analytic continuation.

Evaluation strategy:

* ``Re s >= -4``: Euler-Maclaurin summation,

      zeta(s,a) = sum_{n<N} (n+a)^-s + (N+a)^(1-s)/(s-1) + (N+a)^-s/2
                  + sum_{j<=J} B_2j/(2j)! * (s)_{2j-1} * (N+a)^(-s-2j+1),

  with (s)_m the rising factorial and N, J chosen adaptively from the
  target error.

* ``Re s < -4``: the reflection (Hurwitz's formula, 0 < a <= 1),

      zeta(s,a) = 2 Gamma(1-s) (2 pi)^(s-1)
                  [ sin(pi s/2) C(s,a) + cos(pi s/2) S(s,a) ],

  where C, S are the cosine/sine Dirichlet series sum cos(2 pi n a) n^(s-1)
  etc.  Far left of the critical strip Euler-Maclaurin loses all accuracy
  to cancellation in binary64; the reflection series converges in a few
  dozen terms there and keeps the relative error near machine precision.

s-derivatives are term-wise differentiations of the same expansions, so
they are deterministic and conjugate-symmetric like the values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleProximity

__all__ = [
    "PrecisionPolicy",
    "HurwitzArgs",
    "DEFAULT_POLICY",
    "bernoulli_numbers",
    "hurwitz_zeta",
    "hurwitz_zeta_ds",
    "riemann_zeta",
    "riemann_zeta_ds",
    "gamma",
    "duality_residual",
]

_TWO_PI = 2.0 * math.pi

# Re s below which the reflection formula replaces Euler-Maclaurin.
_REFLECT_RE = -4.0


@dataclass(frozen=True)
class PrecisionPolicy:
    """Error-control knobs for the kernel and everything built on it.

    ``em_direct_terms`` is the floor for the Euler-Maclaurin direct sum
    length N; ``em_bernoulli_terms`` caps the Bernoulli tail length J.
    Tolerances are the binary64 contract; large values are resolved to
    relative precision instead (see module notes).
    """

    target_abs_err: float = 1e-12
    em_direct_terms: int = 10
    em_bernoulli_terms: int = 30
    newton_tol: float = 1e-12
    pole_exclusion_radius: float = 1e-6
    quadrature_tol: float = 1e-9
    zero_class_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.target_abs_err <= 0:
            raise DomainError("target_abs_err must be positive")
        if self.em_direct_terms < 1 or self.em_bernoulli_terms < 1:
            raise DomainError("Euler-Maclaurin term counts must be >= 1")
        if self.em_bernoulli_terms > 60:
            raise DomainError("Bernoulli tail beyond J=60 is unreliable in binary64")
        if self.newton_tol <= 0 or self.quadrature_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.pole_exclusion_radius <= 0:
            raise DomainError("pole_exclusion_radius must be positive")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class HurwitzArgs:
    """Arguments of zeta(s, a): complex exponent s, real shift a > 0."""

    s: complex
    a: float

    def __post_init__(self) -> None:
        if not (self.a > 0):
            raise DomainError(f"Hurwitz shift must satisfy a > 0, got {self.a}")


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _bernoulli_fractions(count: int = 124) -> tuple[Fraction, ...]:
    # B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k, exact over Q
    table = [Fraction(1)]
    for m in range(1, count + 1):
        acc = Fraction(0)
        binom = 1  # C(m+1, k) incrementally
        for k in range(m):
            acc += binom * table[k]
            binom = binom * (m + 1 - k) // (k + 1)
        table.append(-acc / (m + 1))
    return tuple(table)


@lru_cache(maxsize=1)
def _bernoulli_even_floats() -> tuple[float, ...]:
    frac = _bernoulli_fractions()
    return tuple(float(frac[2 * j]) for j in range(62))


@lru_cache(maxsize=1)
def _em_tail_coefficients() -> tuple[float, ...]:
    # B_2j / (2j)! for the Euler-Maclaurin tail, j = 0 unused
    b = _bernoulli_even_floats()
    return tuple(b[j] / math.factorial(2 * j) for j in range(len(b)))


def bernoulli_numbers(j_terms: int) -> list[float]:
    """Return [B_2, B_4, ..., B_{2J}] as floats (exact rational recurrence)."""
    if j_terms < 1:
        raise DomainError("need at least one Bernoulli number")
    if j_terms > 60:
        raise DomainError("B_{2j} beyond j=60 is not reliable as binary64")
    return list(_bernoulli_even_floats()[1 : j_terms + 1])


# ---------------------------------------------------------------------------
# Euler-Maclaurin branch
# ---------------------------------------------------------------------------

def _em_length(s: complex, floor_n: int) -> int:
    # For Re s < 0 a long direct sum only feeds cancellation, so the
    # |Im s| multiplier drops from 1.3 to 0.35 there (tail still converges
    # since 0.35 > 1/(2 pi)).
    factor = 1.3 if s.real >= 0 else 0.35
    return max(floor_n, math.ceil(factor * abs(s.imag)))


def _em_eval(
    s: complex,
    a: float,
    n_terms: int,
    j_cap: int,
    target: float,
    want_ds: bool,
):
    """One Euler-Maclaurin pass; returns (value, ds, err_bound, converged)."""
    grid = np.arange(n_terms, dtype=np.float64) + a
    logs = np.log(grid)
    powers = np.exp(-s * logs)
    value = complex(powers.sum())
    dvalue = complex(-(logs * powers).sum()) if want_ds else 0j

    x = n_terms + a
    lx = math.log(x)
    inv_x2 = x ** -2.0
    x_pow_1ms = cmath.exp((1 - s) * lx)
    x_pow_ms = cmath.exp(-s * lx)

    value += x_pow_1ms / (s - 1) + 0.5 * x_pow_ms
    if want_ds:
        dvalue += (
            -lx * x_pow_1ms / (s - 1)
            - x_pow_1ms / (s - 1) ** 2
            - 0.5 * lx * x_pow_ms
        )

    coeffs = _em_tail_coefficients()
    rising = s          # (s)_{2j-1} for j=1
    drising = 1.0 + 0j  # its s-derivative
    x_pow = x_pow_ms / x  # x^(-s-2j+1) for j=1
    err_bound = abs(x_pow_1ms / (s - 1)) * 1e-16  # rounding floor of the big term
    converged = False
    for j in range(1, j_cap + 1):
        term = coeffs[j] * rising * x_pow
        value += term
        if want_ds:
            dvalue += coeffs[j] * (drising - rising * lx) * x_pow
        nxt_rising = rising * (s + 2 * j - 1) * (s + 2 * j)
        nxt_drising = drising * (s + 2 * j - 1) * (s + 2 * j) + rising * (
            2 * s + 4 * j - 1
        )
        rising, drising = nxt_rising, nxt_drising
        x_pow *= inv_x2
        omitted = abs(coeffs[j + 1] * rising * x_pow)
        if omitted < target:
            err_bound += omitted
            converged = True
            break
    else:
        err_bound += abs(coeffs[j_cap + 1] * rising * x_pow)
    return value, dvalue, err_bound, converged


def _em_adaptive(s: complex, a: float, policy: PrecisionPolicy, want_ds: bool):
    n_terms = _em_length(s, policy.em_direct_terms)
    target = policy.target_abs_err
    for _ in range(4):  # initial pass + up to 3 retries doubling N
        value, dvalue, err, ok = _em_eval(
            s, a, n_terms, policy.em_bernoulli_terms, target, want_ds
        )
        if ok:
            return value, dvalue, err
        n_terms *= 2
    return value, dvalue, err


# ---------------------------------------------------------------------------
# Reflection branch (Re s < -4)
# ---------------------------------------------------------------------------

def _reflection_length(sigma: float) -> int:
    # Tail of sum n^(sigma-1) below 2e-16 relative: N ~ (1/(2e-16 |sigma|))^(1/|sigma|)
    p = -sigma
    n = (1.0 / (2e-16 * p)) ** (1.0 / p)
    return min(60000, max(16, math.ceil(n)))


def _reflect_eval(s: complex, a: float, want_ds: bool):
    sigma = s.real
    n_terms = _reflection_length(sigma)
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    ln_n = np.log(n)
    npow = np.exp((s - 1) * ln_n)
    phase = _TWO_PI * a * n
    cosv = np.cos(phase)
    sinv = np.sin(phase)
    c_series = complex((cosv * npow).sum())
    s_series = complex((sinv * npow).sum())

    pref = 2.0 * _gamma_unchecked(1 - s) * cmath.exp((s - 1) * math.log(_TWO_PI))
    sin_half = cmath.sin(math.pi * s / 2)
    cos_half = cmath.cos(math.pi * s / 2)
    value = pref * (sin_half * c_series + cos_half * s_series)
    err = abs(value) * 1e-14 + 1e-300

    if not want_ds:
        return value, 0j, err

    dc = complex((cosv * ln_n * npow).sum())
    dsr = complex((sinv * ln_n * npow).sum())
    dpref = pref * (math.log(_TWO_PI) - _digamma(1 - s))
    dvalue = dpref * (sin_half * c_series + cos_half * s_series) + pref * (
        0.5 * math.pi * (cos_half * c_series - sin_half * s_series)
        + sin_half * dc
        + cos_half * dsr
    )
    return value, dvalue, err


# ---------------------------------------------------------------------------
# Routing
# ---------------------------------------------------------------------------

def _check_pole(s: complex, policy: PrecisionPolicy) -> None:
    if abs(s - 1) <= policy.pole_exclusion_radius:
        raise PoleProximity(f"s={s} lies inside the exclusion disk around s=1")


def _hurwitz(s: complex, a: float, policy: PrecisionPolicy, want_ds: bool):
    """Value (and optional s-derivative) of zeta(s, a); returns (val, ds, err)."""
    if not (a > 0):
        raise DomainError(f"Hurwitz shift must satisfy a > 0, got {a}")
    _check_pole(s, policy)
    s = complex(s)
    if a == 1.0:
        return _riemann(s, policy, want_ds)
    if s.real >= _REFLECT_RE:
        return _em_adaptive(s, a, policy, want_ds)
    # reflection needs a in (0, 1]: ladder larger shifts down first
    shift_val = 0j
    shift_ds = 0j
    while a > 1.0:
        a -= 1.0
        ln_a = math.log(a)
        p = cmath.exp(-s * ln_a)
        shift_val += p
        if want_ds:
            shift_ds += -ln_a * p
    value, dvalue, err = _reflect_eval(s, a, want_ds)
    return value + shift_val, dvalue + shift_ds, err


def _riemann(s: complex, policy: PrecisionPolicy, want_ds: bool):
    """zeta(s) with the s -> 1-s functional equation left of the strip."""
    _check_pole(s, policy)
    s = complex(s)
    if s.real >= -0.5:
        return _em_adaptive(s, 1.0, policy, want_ds)
    # zeta(s) = 2 (2 pi)^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    zr, dzr, err_r = _em_adaptive(1 - s, 1.0, policy, want_ds)
    g = _gamma_unchecked(1 - s)
    two_pi_pow = cmath.exp((s - 1) * math.log(_TWO_PI))
    sin_half = cmath.sin(math.pi * s / 2)
    chi = 2.0 * two_pi_pow * sin_half * g
    value = chi * zr
    err = abs(value) * 1e-14 + abs(chi) * err_r
    if not want_ds:
        return value, 0j, err
    # d chi/ds without a cot singularity at the trivial zeros
    dchi = 2.0 * two_pi_pow * g * (
        (math.log(_TWO_PI) - _digamma(1 - s)) * sin_half
        + 0.5 * math.pi * cmath.cos(math.pi * s / 2)
    )
    dvalue = dchi * zr - chi * dzr
    return value, dvalue, err


def hurwitz_zeta(args: HurwitzArgs, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Analytically continued Hurwitz zeta(s, a) on C minus {1}."""
    value, _, _ = _hurwitz(args.s, args.a, policy, want_ds=False)
    return value


def hurwitz_zeta_ds(args: HurwitzArgs, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """d zeta(s, a) / ds by term-wise differentiation of the expansion."""
    _, dvalue, _ = _hurwitz(args.s, args.a, policy, want_ds=True)
    return dvalue


def riemann_zeta(s: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Analytically continued Riemann zeta; equals hurwitz_zeta(s, a=1)."""
    value, _, _ = _riemann(complex(s), policy, want_ds=False)
    return value


def riemann_zeta_ds(s: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """d zeta(s) / ds, same routing as riemann_zeta."""
    _, dvalue, _ = _riemann(complex(s), policy, want_ds=True)
    return dvalue


# ---------------------------------------------------------------------------
# Gamma and digamma (Lanczos g=7, 9 terms; reflection for Re < 1/2)
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _gamma_unchecked(z: complex) -> complex:
    z = complex(z)
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * _gamma_unchecked(1 - z))
    z -= 1
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc


def gamma(s: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Complex Gamma function; poles at the nonpositive integers are excluded."""
    s = complex(s)
    if abs(s.imag) <= policy.pole_exclusion_radius:
        nearest = round(s.real)
        if nearest <= 0 and abs(s - nearest) <= policy.pole_exclusion_radius:
            raise PoleProximity(f"Gamma pole at {nearest} is within the exclusion disk")
    return _gamma_unchecked(s)


def _digamma(z: complex) -> complex:
    z = complex(z)
    if z.real < 0.5:
        return _digamma(1 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0j
    while z.real < 10.0:
        acc -= 1.0 / z
        z += 1
    # asymptotic: ln z - 1/(2z) - sum B_2k / (2k z^2k)
    b = _bernoulli_even_floats()
    inv2 = 1.0 / (z * z)
    result = cmath.log(z) - 0.5 / z
    power = inv2
    for k in range(1, 9):
        result -= b[k] / (2 * k) * power
        power *= inv2
    return result + acc


# ---------------------------------------------------------------------------
# Duality (functional-equation) residual
# ---------------------------------------------------------------------------

def duality_residual(s: complex, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Lambda(s) - Lambda(1-s) with Lambda(s) = pi^(-s/2) Gamma(s/2) zeta(s)."""
    s = complex(s)
    for point in (s, 1 - s):
        if abs(point - 1) <= policy.pole_exclusion_radius:
            raise PoleProximity(f"zeta pole: s={point} too close to 1")
    for half in (s / 2, (1 - s) / 2):
        if abs(half.imag) <= policy.pole_exclusion_radius:
            nearest = round(half.real)
            if nearest <= 0 and abs(half - nearest) <= policy.pole_exclusion_radius:
                raise PoleProximity(f"Gamma pole at argument {half}")

    def completed(z: complex) -> complex:
        return (
            cmath.exp(-z / 2 * math.log(math.pi))
            * _gamma_unchecked(z / 2)
            * riemann_zeta(z, policy)
        )

    return completed(s) - completed(1 - s)


# ---------------------------------------------------------------------------
# Batched Euler-Maclaurin (winding-number contours; Re s >= -2 territory)
# ---------------------------------------------------------------------------

def _em_batch(s: np.ndarray, a: float, n_terms: int, j_terms: int) -> np.ndarray:
    """Vectorized zeta(s_i, a) over an array of exponents, one fixed N and J.

    Intended for contour sampling where every point has Re s >= -2 and the
    shared N = max(10, ceil(1.3 max|Im s|)) keeps cancellation harmless.
    """
    s = np.asarray(s, dtype=np.complex128)
    grid = np.arange(n_terms, dtype=np.float64) + a
    logs = np.log(grid)
    value = np.exp(-s[:, None] * logs[None, :]).sum(axis=1)

    x = n_terms + a
    lx = math.log(x)
    x_pow_1ms = np.exp((1 - s) * lx)
    x_pow_ms = np.exp(-s * lx)
    value += x_pow_1ms / (s - 1) + 0.5 * x_pow_ms

    coeffs = _em_tail_coefficients()
    rising = s.copy()
    x_pow = x_pow_ms / x
    inv_x2 = x ** -2.0
    for j in range(1, j_terms + 1):
        value += coeffs[j] * rising * x_pow
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
        x_pow = x_pow * inv_x2
    return value
