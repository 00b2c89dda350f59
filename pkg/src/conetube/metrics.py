"""Bohr and Stepanoff metrics on tube sets, and almost-period search.

Suprema over an unbounded tube set are not computable by sampling, so every
metric here comes as a bracket: the sampled value is a certified lower bound
of the true supremum, and :func:`tube_majorant` gives a certified upper
bound (coefficient majorant maximized analytically over the base).  The
almost-period search accepts a shift tau only when the rigorous coefficient
bound

    B(tau) = sum_n |a_n| * M_n * |exp(i<tau, lambda_n>) - 1|

falls below epsilon, where M_n bounds exp(-<y, lambda_n>) over the base;
accepted shifts are therefore true epsilon-almost periods of the sum on the
whole tube, not just on the sampled grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cones
from .expsum import (DimensionMismatchError, ExponentialSum, _as_vector,
                     _check_growth, evaluate_grid)
from .report import PreconditionError


@dataclass(frozen=True)
class TubeBase:
    """Base K of a tube set T_K: a cone, a shifted cone, a box, or a point."""

    kind: str
    cone_part: cones.Cone | None = None
    offset: np.ndarray | None = None     # shift b, box low corner, or the point
    upper: np.ndarray | None = None      # box high corner

    def __post_init__(self):
        if self.kind not in ("cone", "shifted_cone", "box", "point"):
            raise ValueError(f"unknown tube base kind {self.kind!r}")
        for name in ("offset", "upper"):
            v = getattr(self, name)
            if v is not None:
                v = np.ascontiguousarray(v, dtype=float)
                v.flags.writeable = False
                object.__setattr__(self, name, v)

    @classmethod
    def cone(cls, cone):
        return cls(kind="cone", cone_part=cone)

    @classmethod
    def shifted_cone(cls, cone, b):
        b = _as_vector(b, m=cone.dimension, name="b")
        return cls(kind="shifted_cone", cone_part=cone, offset=b)

    @classmethod
    def box(cls, lo, hi):
        lo = _as_vector(lo, name="lo")
        hi = _as_vector(hi, m=lo.shape[0], name="hi")
        if np.any(lo > hi):
            raise ValueError("box needs lo <= hi componentwise")
        return cls(kind="box", offset=lo, upper=hi)

    @classmethod
    def point(cls, y):
        return cls(kind="point", offset=_as_vector(y, name="y"))

    @property
    def dimension(self):
        if self.cone_part is not None:
            return self.cone_part.dimension
        return self.offset.shape[0]

    def contains_y(self, y, tol=cones.GEOM_TOL):
        y = _as_vector(y, m=self.dimension, name="y")
        if self.kind == "cone":
            return cones.contains(self.cone_part, y, tol=tol)
        if self.kind == "shifted_cone":
            return cones.contains(self.cone_part, y - self.offset, tol=tol)
        if self.kind == "box":
            return bool(np.all(y >= self.offset - tol) and np.all(y <= self.upper + tol))
        return bool(np.linalg.norm(y - self.offset) <= tol)

    def log_term_weights(self, frequencies):
        """log of M_n = sup over y in the base of exp(-<y, lambda_n>).

        Over a cone this is finite only when every frequency lies in the
        conjugate cone (then M_n = 1); a spectrum escaping the conjugate cone
        is a precondition violation.  Boxes maximize the linear exponent at a
        corner, points evaluate it.
        """
        frequencies = np.atleast_2d(np.asarray(frequencies, dtype=float))
        if self.kind in ("cone", "shifted_cone"):
            dual = cones.dual_cone(self.cone_part)
            for lam in frequencies:
                if not cones.contains(dual, lam):
                    raise PreconditionError(
                        f"spectrum point {lam.tolist()} escapes the conjugate "
                        "cone of the tube base")
            if self.kind == "cone":
                return np.zeros(frequencies.shape[0])
            return -(frequencies @ self.offset)
        if self.kind == "box":
            return np.sum(
                np.maximum(-frequencies * self.offset[None, :],
                           -frequencies * self.upper[None, :]), axis=1)
        return -(frequencies @ self.offset)


@dataclass(frozen=True)
class SamplingSpec:
    """Deterministic sampling grid: x extent/points per axis, y samples, seed."""

    x_extent: float
    x_points: int
    y_samples: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.x_extent <= 0:
            raise ValueError("x_extent must be positive")
        if self.x_points < 2:
            raise ValueError("x_points must be >= 2")
        samples = tuple(
            np.ascontiguousarray(_as_vector(y, name="y_sample")) for y in self.y_samples)
        for s in samples:
            s.flags.writeable = False
        object.__setattr__(self, "y_samples", samples)

    def validated_y(self, base: TubeBase):
        if not self.y_samples:
            raise ValueError("sampling spec has no y samples")
        for y in self.y_samples:
            if not base.contains_y(y):
                raise PreconditionError(
                    f"y sample {np.asarray(y).tolist()} lies outside the tube base")
        return self.y_samples


def x_grid(dimension: int, extent: float, points: int) -> np.ndarray:
    """Tensor grid over [-extent/2, extent/2]^m, shape (points^m, m)."""
    axis = np.linspace(-extent / 2.0, extent / 2.0, points)
    if dimension == 1:
        return axis[:, None]
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.column_stack([g.ravel() for g in mesh])


def translated(sum_: ExponentialSum, shift_x) -> ExponentialSum:
    """The sum z -> F(z + shift_x), realized by coefficient phase rotation."""
    shift_x = _as_vector(shift_x, m=sum_.dimension, name="shift_x")
    phases = np.exp(1j * (sum_.frequencies @ shift_x))
    return ExponentialSum(
        sum_.dimension,
        [(lam, a * p) for (lam, a), p in zip(sum_.terms(), phases)])


def tube_majorant(sum_: ExponentialSum, base: TubeBase) -> float:
    """Upper bound sum_n |a_n| M_n for sup over the tube of |F|."""
    if len(sum_) == 0:
        return 0.0
    logw = base.log_term_weights(sum_.frequencies)
    return float(np.sum(np.abs(sum_.coefficients) * np.exp(logw)))


def sup_distance(f: ExponentialSum, g: ExponentialSum, base: TubeBase,
                 spec: SamplingSpec) -> float:
    """Sampled sup of |f - g| over the tube grid; a lower bound of the sup.

    Pair with ``tube_majorant(f - g, base)`` for the certified upper bound.
    """
    if f.dimension != g.dimension:
        raise DimensionMismatchError("sums live in different dimensions")
    diff = f - g
    ys = spec.validated_y(base)
    grid = x_grid(f.dimension, spec.x_extent, spec.x_points)
    best = 0.0
    for y in ys:
        vals = np.abs(evaluate_grid(diff, grid, y))
        if vals.size:
            best = max(best, float(np.max(vals)))
    return best


def stepanoff_distance(f: ExponentialSum, g: ExponentialSum, p: float,
                       base: TubeBase, spec: SamplingSpec,
                       u_points: int = 32) -> float:
    """Sampled S_p distance: local L^p means over unit cubes, sup over z.

    The inner integral over [0,1]^m uses a tensor midpoint rule with
    ``u_points`` per axis; the sup over base points is sampled as in
    :func:`sup_distance`, so the value is again a lower bound.
    """
    if p < 1:
        raise ValueError("Stepanoff order p must be >= 1")
    if f.dimension != g.dimension:
        raise DimensionMismatchError("sums live in different dimensions")
    diff = f - g
    m = f.dimension
    ys = spec.validated_y(base)
    centers = x_grid(m, spec.x_extent, spec.x_points)
    u_axis = (np.arange(u_points) + 0.5) / u_points
    if m == 1:
        u_off = u_axis[:, None]
    else:
        mesh = np.meshgrid(*([u_axis] * m), indexing="ij")
        u_off = np.column_stack([g_.ravel() for g_ in mesh])

    best = 0.0
    for y in ys:
        pts = (centers[:, None, :] + u_off[None, :, :]).reshape(-1, m)
        vals = np.abs(evaluate_grid(diff, pts, y)).reshape(centers.shape[0], -1)
        means = np.mean(vals ** p, axis=1) ** (1.0 / p)
        if means.size:
            best = max(best, float(np.max(means)))
    return best


@dataclass(frozen=True)
class AlmostPeriodReport:
    """Accepted almost periods with their certified bounds.

    ``bound_values`` are the coefficient bounds B(tau) < epsilon that certify
    acceptance; ``sampled_sups`` are grid checks and never exceed the bound.
    ``largest_gap`` is the longest accepted-tau-free stretch of the scan
    (1-D scans only, None otherwise).
    """

    epsilon: float
    window_length: float
    taus: np.ndarray
    bound_values: np.ndarray
    sampled_sups: np.ndarray
    largest_gap: float | None

    def __post_init__(self):
        for name in ("taus", "bound_values", "sampled_sups"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if np.any(self.bound_values >= self.epsilon):
            raise ValueError("accepted tau with bound >= epsilon")
        if np.any(self.sampled_sups > self.bound_values + 1e-12):
            raise ValueError("sampled sup exceeds its certified bound")


def find_almost_periods(sum_: ExponentialSum, epsilon: float, window: float,
                        step: float, base: TubeBase,
                        spec: SamplingSpec | None = None) -> AlmostPeriodReport:
    """Scan tau on step*Z^m intersected with [0, window]^m for B(tau) < epsilon.

    Acceptance uses the coefficient bound B (sound on the whole tube under
    the spectrum-in-conjugate-cone precondition enforced by the base), so the
    returned taus are true epsilon-almost periods.  Sampled sups per accepted
    tau are reported alongside.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if step <= 0:
        raise ValueError("step must be positive")
    if window < 0:
        raise ValueError("window must be nonnegative")
    m = sum_.dimension
    axis = np.arange(0.0, window + step / 2.0, step)
    if axis.size == 0:
        raise ValueError("empty search grid")
    if axis.size ** m > 50_000_000:
        raise ValueError("search grid too large; enlarge step or shrink window")

    logw = base.log_term_weights(sum_.frequencies) if len(sum_) else np.zeros(0)
    weights = np.abs(sum_.coefficients) * np.exp(logw)

    if m == 1:
        taus = axis[:, None]
    else:
        mesh = np.meshgrid(*([axis] * m), indexing="ij")
        taus = np.column_stack([g.ravel() for g in mesh])

    accepted, bounds = [], []
    chunk = 1 << 20
    for start in range(0, taus.shape[0], chunk):
        block = taus[start:start + chunk]
        inner = block @ sum_.frequencies.T          # (chunk, n_terms)
        b = 2.0 * np.abs(np.sin(0.5 * inner)) @ weights
        hit = b < epsilon
        if np.any(hit):
            accepted.append(block[hit])
            bounds.append(b[hit])

    if accepted:
        taus_acc = np.vstack(accepted)
        bounds_acc = np.concatenate(bounds)
    else:
        taus_acc = np.zeros((0, m))
        bounds_acc = np.zeros(0)

    if spec is None:
        spec = SamplingSpec(x_extent=16.0, x_points=64,
                            y_samples=(_default_y(base),), seed=0)
    sups = _sampled_sups(sum_, taus_acc, base, spec)

    largest_gap = None
    if m == 1:
        if taus_acc.shape[0]:
            ts = np.sort(taus_acc[:, 0])
            gaps = np.diff(np.concatenate([[0.0], ts, [window]]))
            largest_gap = float(np.max(gaps)) if gaps.size else float(window)
        else:
            largest_gap = float(window)

    return AlmostPeriodReport(
        epsilon=epsilon,
        window_length=window,
        taus=taus_acc,
        bound_values=bounds_acc,
        sampled_sups=sups,
        largest_gap=largest_gap,
    )


def _default_y(base: TubeBase):
    if base.kind in ("box", "point"):
        return np.array(base.offset)
    if base.kind == "shifted_cone":
        return np.array(base.offset)
    return np.zeros(base.dimension)


def _sampled_sups(sum_, taus, base, spec):
    """max over the grid of |f(z + tau) - f(z)| for each accepted tau."""
    if taus.shape[0] == 0:
        return np.zeros(0)
    ys = spec.validated_y(base)
    grid = x_grid(sum_.dimension, spec.x_extent, spec.x_points)
    sups = np.zeros(taus.shape[0])
    tau_phases = np.exp(1j * (taus @ sum_.frequencies.T)) - 1.0   # (K, n)
    for y in ys:
        exponents = _check_growth(sum_, y)
        term_vals = (sum_.coefficients * np.exp(exponents))[:, None] \
            * np.exp(1j * (grid @ sum_.frequencies.T)).T            # (n, P)
        diff_vals = np.abs(tau_phases @ term_vals)                  # (K, P)
        sups = np.maximum(sups, diff_vals.max(axis=1))
    return sups
