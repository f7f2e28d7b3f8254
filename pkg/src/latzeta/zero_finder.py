"""Zero location inside rectangular windows: winding counts, Newton, scan.

Counting uses the boundary winding number of G(s) = (s-1) E(s, delta).
G is analytic on any window (the simple pole of E at s=1 is removed and
G(1) equals the residue, which is 1), and its winding number equals the
spec'd quantity "winding of E, +1 if the pole lies inside" while staying
well defined when s=1 sits exactly on a window edge.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    BoundaryZero,
    DepthExceeded,
    DerivativeUnderflow,
    DomainError,
    NoConvergence,
    PhaseStepFailure,
)
from .lattice_energy import (
    _energy_batch,
    _energy_pair,
    _energy_terms,
    _fold_delta,
)
from .zeta_kernel import DEFAULT_POLICY, PrecisionPolicy, _riemann

__all__ = [
    "SearchWindow",
    "ZeroRecord",
    "count_zeros",
    "refine_zero",
    "scan",
    "classify",
    "KIND_CRITICAL",
    "KIND_OFF_CRITICAL",
    "KIND_TRIVIAL",
]

log = logging.getLogger(__name__)

KIND_CRITICAL = "critical"
KIND_OFF_CRITICAL = "off_critical"
KIND_TRIVIAL = "trivial"

_BOUNDARY_ZERO_TOL = 1e-8
_SAMPLE_BUDGET = 2**20
_DEDUPE_DIST = 1e-9


@dataclass(frozen=True)
class SearchWindow:
    """Axis-aligned rectangle in the s-plane plus subdivision limits."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    max_subdivision_depth: int = 24
    boundary_samples_init: int = 64

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError("window must have positive extent in both axes")
        if self.max_subdivision_depth < 1 or self.boundary_samples_init < 8:
            raise DomainError("subdivision depth and sample counts are too small")

    @property
    def centroid(self) -> complex:
        return complex(0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    def contains(self, point: complex, margin: float = 0.0) -> bool:
        return (
            self.x_min - margin <= point.real <= self.x_max + margin
            and self.y_min - margin <= point.imag <= self.y_max + margin
        )

    def inflated(self, amount: float) -> "SearchWindow":
        return replace(
            self,
            x_min=self.x_min - amount,
            x_max=self.x_max + amount,
            y_min=self.y_min - amount,
            y_max=self.y_max + amount,
        )

    def quadrisect(self) -> tuple["SearchWindow", ...]:
        xm = 0.5 * (self.x_min + self.x_max)
        ym = 0.5 * (self.y_min + self.y_max)
        return (
            replace(self, x_max=xm, y_max=ym),
            replace(self, x_min=xm, y_max=ym),
            replace(self, x_max=xm, y_min=ym),
            replace(self, x_min=xm, y_min=ym),
        )


@dataclass(frozen=True)
class ZeroRecord:
    """One refined zero of E(., delta) with its classification."""

    delta: float
    rho: complex
    kind: str
    residual: float
    newton_iters: int


# ---------------------------------------------------------------------------
# boundary winding number
# ---------------------------------------------------------------------------

def _dodge_pole(point: complex, horizontal: bool, radius: float) -> complex:
    # contour samples may not land inside the evaluation exclusion disk at s=1
    if abs(point - 1.0) > 4 * radius:
        return point
    shift = 5 * radius
    return point + (shift if horizontal else shift * 1j)


def _initial_path(window: SearchWindow, policy: PrecisionPolicy) -> list[complex]:
    """Counterclockwise closed path: corners plus length-proportional samples."""
    corners = (
        complex(window.x_min, window.y_min),
        complex(window.x_max, window.y_min),
        complex(window.x_max, window.y_max),
        complex(window.x_min, window.y_max),
    )
    per_unit = 8.0
    min_per_side = max(8, window.boundary_samples_init // 8)
    pts: list[complex] = []
    radius = policy.pole_exclusion_radius
    for i, start in enumerate(corners):
        end = corners[(i + 1) % 4]
        length = abs(end - start)
        n = max(min_per_side, math.ceil(per_unit * length))
        horizontal = abs((end - start).imag) < abs((end - start).real)
        for k in range(n):
            pt = start + (end - start) * (k / n)
            pts.append(_dodge_pole(pt, horizontal, radius))
    return pts


class _BoundaryZeroHit(Exception):
    """Internal: a contour sample sits on a zero; caller inflates and retries."""


def _winding_number(evaluator, window: SearchWindow, policy: PrecisionPolicy) -> int:
    """Adaptive winding number of `evaluator` along the window boundary.

    Refines every step whose phase change is >= pi/2; raises
    _BoundaryZeroHit when |E| collapses at a sample and PhaseStepFailure
    when the sample budget is exhausted.
    """
    pts = _initial_path(window, policy)
    e_vals, g_vals = evaluator(np.asarray(pts, dtype=np.complex128))
    if np.min(np.abs(e_vals)) < _BOUNDARY_ZERO_TOL:
        raise _BoundaryZeroHit
    vals = list(g_vals)

    phase_cap = 0.5 * math.pi
    for _ in range(64):  # refinement rounds
        n = len(pts)
        insert_at = [
            i
            for i in range(n)
            if abs(cmath.phase(vals[(i + 1) % n] / vals[i])) >= phase_cap
        ]
        if not insert_at:
            total = sum(
                cmath.phase(vals[(i + 1) % len(vals)] / vals[i])
                for i in range(len(vals))
            )
            winding = total / (2 * math.pi)
            nearest = round(winding)
            if abs(winding - nearest) < 0.25:
                return int(nearest)
            phase_cap = max(phase_cap / 2, math.pi / 16)  # near-integer sanity failed
            insert_at = list(range(n))
        if len(pts) + len(insert_at) > _SAMPLE_BUDGET:
            raise PhaseStepFailure(
                f"needed more than {_SAMPLE_BUDGET} contour samples on {window}"
            )
        radius = policy.pole_exclusion_radius
        mids = []
        for i in insert_at:
            a, b = pts[i], pts[(i + 1) % len(pts)]
            horizontal = abs((b - a).imag) <= abs((b - a).real)
            mids.append(_dodge_pole(0.5 * (a + b), horizontal, radius))
        e_new, g_new = evaluator(np.asarray(mids, dtype=np.complex128))
        if np.min(np.abs(e_new)) < _BOUNDARY_ZERO_TOL:
            raise _BoundaryZeroHit
        merged_pts: list[complex] = []
        merged_vals: list[complex] = []
        mid_iter = iter(zip(mids, g_new))
        insert_set = set(insert_at)
        for i in range(len(pts)):
            merged_pts.append(pts[i])
            merged_vals.append(vals[i])
            if i in insert_set:
                mp_, mv = next(mid_iter)
                merged_pts.append(mp_)
                merged_vals.append(mv)
        pts, vals = merged_pts, merged_vals
    raise PhaseStepFailure(f"phase refinement did not settle on {window}")


def _energy_on_contour(points: np.ndarray, delta: float, policy: PrecisionPolicy):
    if float(points.real.min()) >= -2.001:
        return _energy_batch(points, delta, policy)
    from .lattice_energy import energy  # scalar adaptive fallback

    return np.array([energy(complex(p), delta, policy) for p in points])


def count_zeros(
    window: SearchWindow, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> int:
    """Number of zeros of E(., delta) strictly inside the window.

    Computed as the winding number of (s-1) E(s, delta), i.e. the raw
    winding of E corrected by +1 whenever the pole s=1 lies inside.  A
    boundary sample with |E| < 1e-8 inflates the window by 1e-4 per
    attempt (five retries) before giving up.
    """
    d = _fold_delta(delta)

    def evaluator(pts: np.ndarray):
        e_vals = _energy_on_contour(pts, d, policy)
        return e_vals, (pts - 1.0) * e_vals

    last_exc: Exception | None = None
    for attempt in range(6):
        win = window if attempt == 0 else window.inflated(1e-4 * attempt)
        try:
            return _winding_number(evaluator, win, policy)
        except _BoundaryZeroHit as exc:
            last_exc = exc
    raise BoundaryZero(
        f"|E| < {_BOUNDARY_ZERO_TOL} on the boundary of {window} after 5 nudges"
    ) from last_exc


# ---------------------------------------------------------------------------
# Newton refinement and classification
# ---------------------------------------------------------------------------

_NEWTON_MAX_ITER = 50
_DERIV_FLOOR = 1e-14
_NOISE_FLOOR_FACTOR = 2e-13  # times the magnitude of E's largest term


def refine_zero(
    seed: complex, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> ZeroRecord:
    """Newton iteration on E from `seed`; at most 50 steps.

    Convergence requires |E| <= newton_tol, relaxed to the binary64
    cancellation floor 2e-13 * max-term-magnitude where E's terms are
    huge (far-left zeros); the zero location itself stays conditioned to
    near machine precision there.
    """
    d = _fold_delta(delta)
    rho = complex(seed)
    prev_step: float | None = None
    iters = 0
    for iters in range(1, _NEWTON_MAX_ITER + 1):
        value, deriv, scale = _energy_pair(rho, d, policy)
        residual = abs(value)
        tol = max(policy.newton_tol, _NOISE_FLOOR_FACTOR * scale)
        if residual <= tol:
            if abs(deriv) > _DERIV_FLOOR:  # one polish step, then stop
                polished = rho - value / deriv
                p_val, _, _ = _energy_terms(polished, d, policy, want_ds=False)[0:3]
                if abs(p_val) <= residual:
                    rho, residual = polished, abs(p_val)
            kind = _classify_rho(rho, d, policy)
            return ZeroRecord(d, rho, kind, residual, iters - 1)
        if abs(deriv) < _DERIV_FLOOR:
            raise DerivativeUnderflow(f"|E'| ~ {abs(deriv):.2e} at iterate {rho}")
        step = value / deriv
        rho -= step
        if prev_step is not None and prev_step > 0:
            log.debug(
                "newton iter %d: |step|=%.3e quad-ratio=%.3e",
                iters, abs(step), abs(step) / prev_step**2,
            )
        prev_step = abs(step)
    raise NoConvergence(
        f"no convergence from seed {seed} at delta={d} after {_NEWTON_MAX_ITER} steps"
    )


def _classify_rho(rho: complex, delta: float, policy: PrecisionPolicy) -> str:
    tol = policy.zero_class_tol
    if abs(rho.imag) <= tol and rho.real < 0:
        return KIND_TRIVIAL
    if abs(rho.real - 0.5) <= tol:
        zeta_val, _, _ = _riemann(rho, policy, want_ds=False)
        if abs(zeta_val) <= tol:
            return KIND_CRITICAL
    return KIND_OFF_CRITICAL


def classify(record: ZeroRecord, policy: PrecisionPolicy = DEFAULT_POLICY) -> str:
    """Kind of a refined zero: critical / trivial / off_critical."""
    return _classify_rho(record.rho, record.delta, policy)


# ---------------------------------------------------------------------------
# recursive scan
# ---------------------------------------------------------------------------

def scan(
    window: SearchWindow, delta: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> list[ZeroRecord]:
    """All zeros inside the window, by quadrisection until counts reach one.

    Unit-count cells are refined from their centroid; a refined zero that
    escapes its cell re-subdivides instead of being trusted.  The final
    list is deduplicated, filtered to the window, sorted by (Im, Re), and
    must reproduce the whole-window count.
    """
    d = _fold_delta(delta)
    total = count_zeros(window, d, policy)
    records = _scan_cell(window, d, policy, depth=0, known_count=total)

    unique: list[ZeroRecord] = []
    for rec in sorted(records, key=lambda r: (r.rho.imag, r.rho.real)):
        if unique and abs(rec.rho - unique[-1].rho) < _DEDUPE_DIST:
            continue
        if not window.contains(rec.rho, margin=1e-9):
            continue
        unique.append(rec)
    if len(unique) != total:
        raise DepthExceeded(
            f"scan found {len(unique)} zeros but the window winding count is {total}"
        )
    return unique


def _scan_cell(
    window: SearchWindow,
    delta: float,
    policy: PrecisionPolicy,
    depth: int,
    known_count: int | None = None,
) -> list[ZeroRecord]:
    count = (
        known_count
        if known_count is not None
        else count_zeros(window, delta, policy)
    )
    if count == 0:
        return []
    if count == 1:
        try:
            rec = refine_zero(window.centroid, delta, policy)
            if window.contains(rec.rho, margin=1e-9):
                return [rec]
        except (NoConvergence, DerivativeUnderflow):
            pass  # fall through to subdivision
    if depth >= window.max_subdivision_depth:
        raise DepthExceeded(
            f"unresolved cluster of {count} zero(s) in "
            f"[{window.x_min}, {window.x_max}] x [{window.y_min}, {window.y_max}] "
            f"at depth {depth}"
        )
    found: list[ZeroRecord] = []
    for child in window.quadrisect():
        found.extend(_scan_cell(child, delta, policy, depth + 1))
    return found
