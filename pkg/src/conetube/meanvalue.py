"""Cube means, box-mean smoothing and off-spectrum decay probes.

The cube mean of an exponential sum against a target frequency,

    (1/(2N))^m  integral over [-N, N]^m of F(x + x' + iy) exp(-i<x+x', lam>) dx,

has an exact closed form because every term is separable: each axis
contributes a factor sinc(N * (lambda_n - lam)_j) with sinc(t) = sin(t)/t,
and the window shift x' contributes the phase exp(i<x', lambda_n - lam>).
As N grows the mean converges to the coefficient of lam (times the height
damping), which is the mechanism behind coefficient extraction and behind
the off-spectrum vanishing used to locate spectra inside cones.

The sampled mode re-computes the same integral by a tensor midpoint rule and
exists purely as an independent oracle for the closed form; its error obeys
the documented bound of :func:`midpoint_error_bound`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .expsum import (DimensionMismatchError, ExponentialSum, _as_vector,
                     _check_growth)

#: |lambda_n^j * N| closer than this to a nonzero multiple of 2*pi is
#: rejected by box smoothing (the multiplier would vanish and kill the term).
ADMISSIBILITY_TOL = 1e-9


class InadmissibleWidthError(ValueError):
    """Box width makes some multiplier vanish, changing the spectrum."""


def sinc(t):
    """sin(t)/t with sinc(0) = 1 (unnormalized)."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    nz = t != 0
    out[nz] = np.sin(t[nz]) / t[nz]
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MeanSpec:
    """Cube-mean parameters: half-width N, window shift x', height y.

    ``quadrature`` selects the closed form or the midpoint-sampled oracle;
    sampled mode needs ``points_per_axis`` >= 2.
    """

    half_width: float
    shift: np.ndarray
    height: np.ndarray
    quadrature: str = "closed-form"
    points_per_axis: int = 0

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        shift = _as_vector(self.shift, name="shift")
        height = _as_vector(self.height, m=shift.shape[0], name="height")
        shift.flags.writeable = False
        height.flags.writeable = False
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "height", height)
        if self.quadrature not in ("closed-form", "sampled"):
            raise ValueError(f"unknown quadrature mode {self.quadrature!r}")
        if self.quadrature == "sampled" and self.points_per_axis < 2:
            raise ValueError("sampled quadrature needs points_per_axis >= 2")

    @property
    def dimension(self):
        return self.shift.shape[0]


@dataclass(frozen=True)
class LinearMap:
    """Real m x m operator; must be nondegenerate when used as a probe map."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix has non-finite entries")
        mat = np.ascontiguousarray(mat)
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def is_nondegenerate(self, tol=1e-12):
        return abs(np.linalg.det(self.matrix)) > tol


def cube_mean_coefficient(sum_: ExponentialSum, lam, spec: MeanSpec) -> complex:
    """Mean of F(x + x' + iy) exp(-i<x+x', lam>) over the cube [-N, N]^m.

    Closed form: sum_n a_n exp(-<y, lambda_n>) exp(i<x', lambda_n - lam>)
    prod_j sinc(N (lambda_n - lam)_j).  Sampled mode evaluates the same
    integral with a tensor midpoint rule (per-term, per-axis midpoint sums;
    the tensor-grid sum of a separable integrand factorizes exactly).
    """
    lam = _as_vector(lam, m=sum_.dimension, name="lambda")
    if spec.dimension != sum_.dimension:
        raise DimensionMismatchError(
            f"spec dimension {spec.dimension} != sum dimension {sum_.dimension}")
    exponents = _check_growth(sum_, spec.height)
    if len(sum_) == 0:
        return 0j

    diffs = sum_.frequencies - lam[None, :]
    phases = np.exp(1j * (diffs @ spec.shift))
    weights = sum_.coefficients * np.exp(exponents) * phases
    n_half = spec.half_width

    if spec.quadrature == "closed-form":
        axis_factors = sinc(n_half * diffs)
    else:
        p = spec.points_per_axis
        mids = -n_half + (np.arange(p) + 0.5) * (2.0 * n_half / p)
        # midpoint approximation of (1/2N) * integral of exp(i s x) dx per axis
        axis_factors = np.mean(
            np.exp(1j * diffs[:, :, None] * mids[None, None, :]), axis=2)

    total = 0j
    for k in range(len(sum_)):
        total += weights[k] * np.prod(axis_factors[k])
    return complex(total)


def midpoint_error_bound(sum_: ExponentialSum, lam, spec: MeanSpec) -> float:
    """Rigorous |closed form - sampled| bound for the midpoint rule.

    Per axis the composite midpoint error for the mean of exp(i s x) is at
    most h^2 s^2 / 24 with h = 2N/P; per term the per-axis errors compound as
    prod(1 + b_j) - 1 since every exact factor has modulus <= 1.
    """
    lam = _as_vector(lam, m=sum_.dimension, name="lambda")
    if spec.points_per_axis < 2:
        raise ValueError("error bound needs points_per_axis >= 2")
    exponents = _check_growth(sum_, spec.height)
    if len(sum_) == 0:
        return 0.0
    h = 2.0 * spec.half_width / spec.points_per_axis
    b = (h * h / 24.0) * (sum_.frequencies - lam[None, :]) ** 2
    per_term = np.prod(1.0 + b, axis=1) - 1.0
    return float(np.sum(np.abs(sum_.coefficients) * np.exp(exponents) * per_term))


def box_smooth(sum_: ExponentialSum, width: float) -> ExponentialSum:
    """Box mean g(z) = width^-m * integral over [0, width]^m of F(z + t) dt.

    Each coefficient picks up the factor prod_j m_j with
    m_j = (exp(i lambda_n^j width) - 1) / (i lambda_n^j width) for
    lambda_n^j != 0 and m_j = 1 otherwise.  The width is admissible only if
    no lambda_n^j * width lands on a nonzero multiple of 2*pi: that keeps
    every multiplier nonzero and hence the spectrum unchanged.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    bad = []
    for k, lam in enumerate(sum_.frequencies):
        for j, l in enumerate(lam):
            if l == 0.0:
                continue
            t = l * width
            nearest = 2.0 * math.pi * round(t / (2.0 * math.pi))
            if nearest != 0.0 and abs(t - nearest) <= ADMISSIBILITY_TOL:
                bad.append((k, j, t))
    if bad:
        detail = "; ".join(
            f"term {k} axis {j}: lambda*N = {t:.12g}" for k, j, t in bad)
        raise InadmissibleWidthError(
            f"width {width} hits 2*pi*Z on {len(bad)} multiplier(s): {detail}")

    terms = []
    for lam, a in sum_.terms():
        factor = 1.0 + 0j
        for l in lam:
            if l != 0.0:
                t = l * width
                factor *= (np.exp(1j * t) - 1.0) / (1j * t)
        terms.append((lam, a * factor))
    return ExponentialSum(sum_.dimension, terms)


@dataclass(frozen=True)
class DecayProbeResult:
    """Magnitudes of the linear-section cube mean along a schedule of widths.

    ``stalled`` lists (term index, axis) pairs whose sinc argument vanishes;
    those factors are identically 1 and the decay may stall.
    """

    entries: tuple = field(default_factory=tuple)      # (N, magnitude) pairs
    stalled: tuple = field(default_factory=tuple)      # (term, axis) pairs

    @property
    def magnitudes(self):
        return [mag for _, mag in self.entries]


def offspectrum_decay_probe(sum_: ExponentialSum, lam, a_map: LinearMap,
                            schedule) -> DecayProbeResult:
    """|mean over [-N, N]^m of F(A xi) exp(-i<A xi, lam>)| per N in schedule.

    Closed form |sum_n a_n prod_j sinc(N <A e_j, lambda_n - lam>)|; requires
    lam off the spectrum and a nondegenerate A.  The schedule must increase.
    """
    lam = _as_vector(lam, m=sum_.dimension, name="lambda")
    if a_map.dimension != sum_.dimension:
        raise DimensionMismatchError("operator dimension mismatch")
    if not a_map.is_nondegenerate():
        raise ValueError("operator A is degenerate")
    schedule = [float(n) for n in schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be nonempty and strictly increasing")
    if any(n <= 0 for n in schedule):
        raise ValueError("schedule entries must be positive")

    diffs = sum_.frequencies - lam[None, :]
    if len(sum_) and np.min(np.linalg.norm(diffs, axis=1)) <= 1e-12:
        raise ValueError("probe frequency lies in the spectrum")

    # arguments s_{n,j} = <A e_j, lambda_n - lam> = (A^T (lambda_n - lam))_j
    args = diffs @ a_map.matrix
    stalled = tuple(
        (int(k), int(j)) for k, j in np.argwhere(np.abs(args) <= 1e-12))

    entries = []
    for n_half in schedule:
        vals = np.prod(sinc(n_half * args), axis=1)
        entries.append((n_half, float(abs(np.sum(sum_.coefficients * vals)))))
    return DecayProbeResult(entries=tuple(entries), stalled=stalled)
