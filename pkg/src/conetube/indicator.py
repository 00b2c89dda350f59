"""Radial growth indicator of exponential sums and coefficient bounds.

For a finite sum the indicator h(y) = sup_x limsup_r (1/r) log|F(x + iry)| is
the support function of the spectrum evaluated at -y: the term with the
least <y, lambda_n> dominates along the ray and contributes its decay (or
growth) rate exactly.  :func:`indicator_oracle` is that closed form;
:func:`p_indicator_estimate` recovers the same number from log-modulus
samples by least squares, which is the numerical side of the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import support_function
from .expsum import (ExponentialSum, GrowthOverflowError, _as_vector)
from .metrics import SamplingSpec, x_grid
from .report import VerificationReport, make_report

#: log|F| below this is treated as a hit on a zero of F and excluded.
LOG_FLOOR = np.log(1e-300)


@dataclass(frozen=True)
class IndicatorEstimate:
    """Regression estimate of the radial growth rate along direction y."""

    y: np.ndarray
    slope: float
    oracle: float
    residual: float
    r_max: float
    x_star: np.ndarray
    excluded: int = 0

    def __post_init__(self):
        for name in ("y", "x_star"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")


def indicator_oracle(sum_: ExponentialSum, y) -> float:
    """Closed form of the indicator: H_{spectrum}(-y) = max_n <lambda_n, -y>."""
    if len(sum_) == 0:
        raise ValueError("indicator of the empty sum")
    y = _as_vector(y, m=sum_.dimension, name="y")
    return support_function(sum_.frequencies, -y)


def _log_abs_on_ray(sum_, x_points, y, radii):
    """log|F(x + i r y)| for all sample x (rows) and radii (columns).

    Evaluated in scaled form (largest exponential factored out), so arbitrarily
    deep radii are fine as long as the positive exponent budget holds.
    """
    decay = -(sum_.frequencies @ y)                   # slope of each term
    exps = np.outer(decay, radii)                     # (n_terms, n_r)
    peak = np.max(exps, axis=0)                       # (n_r,)
    scaled = np.exp(exps - peak[None, :])
    phases = np.exp(1j * (x_points @ sum_.frequencies.T))   # (n_x, n_terms)
    resid = np.abs(phases @ (sum_.coefficients[:, None] * scaled))
    with np.errstate(divide="ignore"):
        return np.log(resid) + peak[None, :]


def p_indicator_estimate(sum_: ExponentialSum, y, radii,
                         x_spec: SamplingSpec) -> IndicatorEstimate:
    """Least-squares slope of log|F(x + iry)| in r, maximized over sampled x.

    The fit uses the top half of the (increasing) radius schedule, where the
    dominant term has separated; sample points where |F| collapses below the
    floor (a zero of F on the ray) are excluded from that ray's fit.
    """
    if len(sum_) == 0:
        raise ValueError("indicator of the empty sum")
    y = _as_vector(y, m=sum_.dimension, name="y")
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2 or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be an increasing schedule with >= 2 entries")
    r_max = float(radii[-1])
    budget = r_max * float(np.max(np.abs(sum_.frequencies @ y), initial=0.0))
    if budget > 700.0:
        raise GrowthOverflowError(
            f"r_max * max|<y, lambda>| = {budget:.3g} exceeds 700")

    xs = x_grid(sum_.dimension, x_spec.x_extent, x_spec.x_points)
    top = radii[radii.size // 2:]
    vals = _log_abs_on_ray(sum_, xs, y, top)          # (n_x, n_top)

    oracle = indicator_oracle(sum_, y)
    best_slope, best_x, excluded = -np.inf, None, 0
    finite = vals > LOG_FLOOR
    for i in range(xs.shape[0]):
        mask = finite[i]
        excluded += int(np.sum(~mask))
        if np.sum(mask) < 2:
            continue
        slope = np.polyfit(top[mask], vals[i, mask], 1)[0]
        if slope > best_slope:
            best_slope, best_x = float(slope), xs[i]
    if best_x is None:
        raise ValueError("all ray samples were excluded (|F| below floor)")

    return IndicatorEstimate(
        y=y, slope=best_slope, oracle=oracle,
        residual=abs(best_slope - oracle),
        r_max=r_max, x_star=best_x, excluded=excluded)


def coefficient_bound_check(sum_: ExponentialSum, y_samples,
                            x_spec: SamplingSpec,
                            grid_slack: float = 5e-2) -> VerificationReport:
    """Check |a_n| <= sup_x|F(x+iy)| * exp(<y, lambda_n>) at every height.

    The sampled sup underestimates the true one, so the comparison allows the
    relative ``grid_slack``; the report's violation is the worst relative
    excess of |a_n| exp(-<y, lambda_n>) over the sampled sup.
    """
    if len(sum_) == 0:
        raise ValueError("coefficient bound of the empty sum")
    xs = x_grid(sum_.dimension, x_spec.x_extent, x_spec.x_points)
    y_samples = [_as_vector(y, m=sum_.dimension, name="y") for y in y_samples]
    worst = -np.inf
    for y in y_samples:
        budget = float(np.max(np.abs(sum_.frequencies @ y)))
        if budget > 700.0:
            raise GrowthOverflowError(
                f"max|<y, lambda>| = {budget:.3g} exceeds 700 at y = {y.tolist()}")
        logs = _log_abs_on_ray(sum_, xs, y, np.array([1.0]))[:, 0]
        sup = float(np.exp(np.max(logs)))
        damped = np.abs(sum_.coefficients) * np.exp(-(sum_.frequencies @ y))
        worst = max(worst, float(np.max(damped / sup - 1.0)))
    return make_report(
        check="coefficient_bound",
        max_violation=worst,
        tolerance=grid_slack,
        instance_digest=f"terms={len(sum_)};m={sum_.dimension};"
                        f"y_samples={len(y_samples)}",
        grid_provenance=f"x-grid {x_spec.x_points}^{sum_.dimension} "
                        f"over extent {x_spec.x_extent}; seed {x_spec.seed}",
    )
