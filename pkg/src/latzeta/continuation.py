"""Predictor-corrector tracing of zero curves in the lattice parameter.

Curves are continued in delta with a linear predictor and Newton
corrector.  Rejection uses two absolute guards: the corrector may not
land farther than jump_guard * (step/0.01) from the prediction, and the
zero may not move more than jump_guard per accepted step (neighbouring
curves sit ~ 2 pi / ln 2 apart in Im s near delta = 1, so 0.5 rules out
branch skips).  Near delta -> 1 the real part of a non-standard curve
runs like (2/ln 2) ln(1-delta), which the motion guard converts into
geometric step shrinking; once Re rho falls below the divergence floor
the trace stops with status "diverged".
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    DerivativeUnderflow,
    DomainError,
    NoConvergence,
    StepCollapse,
    Unclassifiable,
)
from .zero_finder import (
    KIND_TRIVIAL,
    SearchWindow,
    ZeroRecord,
    refine_zero,
    scan,
)
from .zeta_kernel import DEFAULT_POLICY, PrecisionPolicy

__all__ = [
    "BranchSample",
    "BranchCurve",
    "STATUS_OK",
    "STATUS_DIVERGED",
    "trace_branch",
    "classify_branch",
    "sweep_figure_data",
    "thread_count_from_env",
]

_LN2 = math.log(2.0)

STATUS_OK = "ok"
STATUS_DIVERGED = "diverged"

BRANCH_STANDARD = "standard"
BRANCH_NON_STANDARD = "non_standard"

_STEP_FLOOR = 1e-6
_CLASSIFY_MIN_DELTA = 0.95
_TERMINAL_DELTA = 1.0 - 1e-3


class BranchSample(NamedTuple):
    delta: float
    rho: complex
    residual: float


@dataclass
class BranchCurve:
    """One delta-parameterized curve of zeros."""

    branch_id: int
    branch_kind: str | None
    k_index: int | None
    samples: list[BranchSample] = field(default_factory=list)
    status: str = STATUS_OK

    @property
    def last(self) -> BranchSample:
        return self.samples[-1]


def trace_branch(
    seed: ZeroRecord,
    delta_target: float,
    step: float,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    jump_guard: float = 0.5,
    divergence_floor: float = -30.0,
) -> BranchCurve:
    """Continue the zero at `seed` to delta_target in steps of at most `step`.

    Rejected steps are halved; halving below 1e-6 raises StepCollapse.
    The curve ends early with status "diverged" once Re rho drops below
    divergence_floor.
    """
    if not (0 < step <= 0.01):
        raise DomainError("continuation steps above 0.01 are unsafe; use step <= 0.01")
    if not (0 < delta_target < 1) or not (0 < seed.delta < 1):
        raise DomainError("the continuation path must stay inside (0, 1)")

    samples = [BranchSample(seed.delta, seed.rho, seed.residual)]
    status = STATUS_OK
    direction = 1.0 if delta_target >= seed.delta else -1.0
    pred_guard = jump_guard * (step / 0.01)
    h = step

    while samples[-1].delta != delta_target:
        last = samples[-1]
        d_new = last.delta + direction * h
        if (d_new - delta_target) * direction >= 0:
            d_new = delta_target
        span = d_new - last.delta
        if len(samples) >= 2:
            prev = samples[-2]
            slope = (last.rho - prev.rho) / (last.delta - prev.delta)
            predicted = last.rho + slope * span
        else:
            predicted = last.rho

        rec: ZeroRecord | None
        try:
            rec = refine_zero(predicted, d_new, policy)
        except (NoConvergence, DerivativeUnderflow):
            rec = None
        if (
            rec is None
            or abs(rec.rho - predicted) > pred_guard
            or abs(rec.rho - last.rho) > jump_guard
        ):
            h *= 0.5
            if h < _STEP_FLOOR:
                raise StepCollapse(
                    f"step collapsed below {_STEP_FLOOR} near delta={last.delta} "
                    f"(rho={last.rho})"
                )
            continue
        samples.append(BranchSample(d_new, rec.rho, rec.residual))
        if rec.rho.real < divergence_floor:
            status = STATUS_DIVERGED
            break
        h = min(2 * h, step)

    return BranchCurve(
        branch_id=-1, branch_kind=None, k_index=None, samples=samples, status=status
    )


def classify_branch(
    curve: BranchCurve, policy: PrecisionPolicy = DEFAULT_POLICY
) -> tuple[str, int | None]:
    """Standard (ends at a critical zero) vs non-standard (Re rho diverges).

    Sets branch_kind and k_index on the curve and returns them.  For a
    diverged curve k indexes the limit ordinate (2k+1) pi / ln 2.
    """
    last = curve.last
    if curve.status == STATUS_DIVERGED:
        k = round((last.rho.imag * _LN2 / math.pi - 1.0) / 2.0)
        curve.branch_kind, curve.k_index = BRANCH_NON_STANDARD, k
        return BRANCH_NON_STANDARD, k
    if last.delta < _CLASSIFY_MIN_DELTA:
        raise Unclassifiable(
            f"curve ends at delta={last.delta} < {_CLASSIFY_MIN_DELTA} without diverging"
        )
    if last.delta >= _TERMINAL_DELTA and abs(last.rho.real - 0.5) <= 1e-3:
        curve.branch_kind, curve.k_index = BRANCH_STANDARD, None
        return BRANCH_STANDARD, None
    raise Unclassifiable(
        f"terminal sample delta={last.delta}, rho={last.rho} fits neither kind"
    )


def thread_count_from_env() -> int:
    """Parallelism cap from LATZETA_THREADS (default 1)."""
    raw = os.environ.get("LATZETA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep_figure_data(
    delta_min: float,
    delta_max: float,
    step: float,
    window: SearchWindow,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    threads: int = 1,
) -> list[BranchCurve]:
    """Trace every branch seeded by the complete zero set at delta = 1/2.

    Each seed is continued left to delta_min and right to
    max(delta_max, 1 - 1e-6); the right extension either reaches the
    terminal delta (standard) or dives past the divergence floor
    (non-standard).  Output order follows the seed order (Im, then Re),
    so it is deterministic for any thread count.
    """
    if not (0 < delta_min < delta_max < 1):
        raise DomainError("sweep range must satisfy 0 < delta_min < delta_max < 1")
    if step > 0.01:
        raise DomainError("sweep step must be <= 0.01")

    # widen the seed window upward: curves entering [y_min, y_max] from
    # above at other delta still need a seed at delta = 1/2
    seed_window = SearchWindow(
        window.x_min,
        window.x_max,
        window.y_min,
        window.y_max + 2.5,
        window.max_subdivision_depth,
        window.boundary_samples_init,
    )
    seeds = [r for r in scan(seed_window, 0.5, policy) if r.kind != KIND_TRIVIAL]
    right_target = max(delta_max, 1.0 - 1e-6)

    def build(indexed: tuple[int, ZeroRecord]) -> BranchCurve:
        branch_id, seed = indexed
        merged: list[BranchSample] = []
        if delta_min < seed.delta:
            left = trace_branch(seed, delta_min, step, policy)
            merged.extend(reversed(left.samples[1:]))
        merged.append(BranchSample(seed.delta, seed.rho, seed.residual))
        right = trace_branch(seed, right_target, step, policy)
        merged.extend(right.samples[1:])
        curve = BranchCurve(
            branch_id=branch_id,
            branch_kind=None,
            k_index=None,
            samples=merged,
            status=right.status,
        )
        classify_branch(curve, policy)
        return curve

    jobs = list(enumerate(seeds))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            curves = list(pool.map(build, jobs))
    else:
        curves = [build(job) for job in jobs]
    return curves
