"""Theorem-level numerical checks and the seeded verification suite.

Each check composes the library modules into a pass/fail
:class:`~conetube.report.VerificationReport`:

* ``max_modulus``: sampled sup of |F| over a tube grid does not exceed the
  sup over a finer real grid (up to grid slack) when the spectrum sits in
  the conjugate cone of the tube base.
* ``convexity``: psi(y) = sup_x log|F(x+iy)| is midpoint-convex along
  segments, and bounded by psi(0) along segments starting at the origin
  inside the conjugate cone.
* ``extension_limit``: F(z) -> a_0 along rays in a compactly included cone,
  below its closed-form coefficient majorant, with the majorant itself
  vanishing at the ray end.
* ``offspectrum_vanishing``: linear-section cube means decay at
  off-spectrum frequencies.
* ``indicator_equality``: regression growth rate equals the spectrum's
  support function at -y.
* ``smoothing_identity``: box smoothing via multipliers equals numerical
  quadrature of the defining mean and preserves the spectrum.
* ``fejer_convergence``: damped sums converge monotonically under the
  coefficient majorant with admissible damping factors.

Checks only falsify implications under satisfied hypotheses: instances with
unmet hypotheses yield ``skipped`` reports, never failures.  The suite is a
pure function of its config; with a fixed seed the emitted reports are
byte-identical across runs, including parallel ones (independent per-family
seed streams, ordered assembly).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cones, fejer, meanvalue, metrics
from .expsum import DEDUP_TOL, ExponentialSum, TubePoint, evaluate, evaluate_grid
from .indicator import p_indicator_estimate
from .metrics import SamplingSpec, TubeBase, x_grid
from .report import (PreconditionError, VerificationReport, make_report,
                     make_skipped)

#: Registered check families, in canonical order.
FAMILIES = (
    "convexity",
    "extension_limit",
    "fejer_convergence",
    "indicator_equality",
    "max_modulus",
    "offspectrum_vanishing",
    "smoothing_identity",
)

#: Default relative slack for sampled-sup comparisons.
GRID_SLACK = 5e-2


# ---------------------------------------------------------------------------
# probes and single checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityProbe:
    """Samples of psi(y_t) = sup_x log|F(x + i y_t)| along a segment."""

    y0: np.ndarray
    y1: np.ndarray
    samples: tuple   # ordered (t, psi) pairs, t in [0, 1]

    def __post_init__(self):
        ts = [t for t, _ in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("probe samples must be ordered in t")


def convexity_probe(sum_: ExponentialSum, y0, y1, n_samples: int,
                    spec: SamplingSpec) -> ConvexityProbe:
    y0 = np.asarray(y0, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    if n_samples < 3:
        raise ValueError("need at least 3 samples along the segment")
    grid = x_grid(sum_.dimension, spec.x_extent, spec.x_points)
    samples = []
    for t in np.linspace(0.0, 1.0, n_samples):
        y = (1.0 - t) * y0 + t * y1
        peak = float(np.max(np.abs(evaluate_grid(sum_, grid, y))))
        if peak <= 0.0:
            raise ValueError("sampled |F| vanished along the segment")
        samples.append((float(t), math.log(peak)))
    return ConvexityProbe(y0=y0, y1=y1, samples=tuple(samples))


def _require_spectrum_in(sum_: ExponentialSum, cone: cones.Cone, what: str):
    for lam in sum_.frequencies:
        if not cones.contains(cone, lam):
            raise PreconditionError(
                f"spectrum point {lam.tolist()} escapes {what}")


def verify_max_modulus(sum_: ExponentialSum, gamma: cones.Cone,
                       spec: SamplingSpec, base: TubeBase | None = None,
                       tol: float = GRID_SLACK, real_points: int | None = None,
                       digest: str = "") -> VerificationReport:
    """Sampled tube sup of |F| vs. a finer real-grid sup, within slack.

    ``base`` defaults to the conjugate cone of ``gamma``; a shifted-cone base
    exercises the shifted-domain variant with the same tolerances.
    """
    _require_spectrum_in(sum_, gamma, "the declared cone")
    if base is None:
        base = TubeBase.cone(cones.dual_cone(gamma))
    ys = spec.validated_y(base)

    grid = x_grid(sum_.dimension, spec.x_extent, spec.x_points)
    tube_sup = 0.0
    for y in ys:
        tube_sup = max(tube_sup, float(np.max(np.abs(evaluate_grid(sum_, grid, y)))))

    n_real = real_points if real_points is not None else 4 * spec.x_points
    real_grid = x_grid(sum_.dimension, spec.x_extent, n_real)
    real_sup = float(np.max(np.abs(evaluate_grid(sum_, real_grid,
                                                 np.zeros(sum_.dimension)))))
    return make_report(
        check="max_modulus",
        max_violation=tube_sup / real_sup - 1.0,
        tolerance=tol,
        instance_digest=digest or f"terms={len(sum_)};m={sum_.dimension}",
        grid_provenance=(
            f"tube grid {spec.x_points}^{sum_.dimension} x {len(ys)} heights, "
            f"base={base.kind}; real grid {n_real}^{sum_.dimension}; "
            f"extent {spec.x_extent}"),
    )


def verify_convexity(sum_: ExponentialSum, y0, y1, n_samples: int,
                     spec: SamplingSpec, gamma: cones.Cone | None = None,
                     tol: float = GRID_SLACK,
                     digest: str = "") -> VerificationReport:
    """Midpoint convexity of psi along [y0, y1]; psi <= psi(0) when it applies.

    The origin-bound branch runs when ``gamma`` is supplied, the spectrum lies
    in it, y0 = 0 and the segment stays in the conjugate cone.
    """
    probe = convexity_probe(sum_, y0, y1, n_samples, spec)
    psi = np.array([p for _, p in probe.samples])
    violation = 0.0
    for i in range(1, psi.size - 1):
        violation = max(violation, psi[i] - 0.5 * (psi[i - 1] + psi[i + 1]))

    lemma_branch = ""
    if gamma is not None and np.linalg.norm(probe.y0) <= 1e-12:
        dual = cones.dual_cone(gamma)
        in_hypothesis = all(
            cones.contains(gamma, lam) for lam in sum_.frequencies) and \
            cones.contains(dual, probe.y1)
        if in_hypothesis:
            violation = max(violation, float(np.max(psi - psi[0])))
            lemma_branch = "; origin-bound branch active"

    return make_report(
        check="convexity",
        max_violation=violation,
        tolerance=tol,
        instance_digest=digest or f"terms={len(sum_)};m={sum_.dimension}",
        grid_provenance=(
            f"{n_samples} segment samples, x-grid {spec.x_points}^"
            f"{sum_.dimension} over extent {spec.x_extent}{lemma_branch}"),
    )


def verify_extension_limit(sum_: ExponentialSum, gamma: cones.Cone,
                           gamma_prime: cones.Cone, rays,
                           spec: SamplingSpec, offset=None,
                           slack: float = 1e-12, tail_target: float = 1e-6,
                           digest: str = "") -> VerificationReport:
    """|F - a_0| below its coefficient majorant along rays, majorant -> 0.

    ``rays`` is a list of (unit direction, increasing t schedule).  Rays whose
    majorant cannot decay (a spectrum point orthogonal to the direction, the
    interior-spectrum hypothesis unmet) are skipped, not failed.
    """
    _require_spectrum_in(sum_, gamma, "the declared cone")
    dual = cones.dual_cone(gamma)
    if not cones.compactly_included(gamma_prime, dual):
        return make_skipped(
            "extension_limit",
            "ray cone is not compactly included in the conjugate cone",
            digest or f"terms={len(sum_)};m={sum_.dimension}")

    offset = np.zeros(sum_.dimension) if offset is None else np.asarray(offset, float)
    zero_mask = np.linalg.norm(sum_.frequencies, axis=1) <= DEDUP_TOL
    a0 = complex(np.sum(sum_.coefficients[zero_mask])) if np.any(zero_mask) else 0j
    nz_freqs = sum_.frequencies[~zero_mask]
    nz_abs = np.abs(sum_.coefficients[~zero_mask])

    grid = x_grid(sum_.dimension, spec.x_extent, spec.x_points)
    violation = -math.inf
    stalled_rays, evaluated = [], 0
    for k, (u, schedule) in enumerate(rays):
        u = np.asarray(u, dtype=float)
        if not cones.contains(gamma_prime, u):
            raise PreconditionError(f"ray {u.tolist()} lies outside gamma_prime")
        gaps = nz_freqs @ u
        if nz_freqs.shape[0] and np.min(gaps) <= 0:
            stalled_rays.append(k)
            continue
        evaluated += 1
        for t in schedule:
            y = offset + t * u
            maj = float(np.sum(nz_abs * np.exp(-(nz_freqs @ y))))
            sup = float(np.max(np.abs(evaluate_grid(sum_, grid, y) - a0)))
            violation = max(violation, sup - maj)
        violation = max(violation, maj - tail_target)

    if evaluated == 0:
        return make_skipped(
            "extension_limit",
            "interior-spectrum hypothesis unmet on every ray "
            f"(stalled rays {stalled_rays})",
            digest or f"terms={len(sum_)};m={sum_.dimension}")
    note = f"; stalled rays {stalled_rays}" if stalled_rays else ""
    return make_report(
        check="extension_limit",
        max_violation=violation,
        tolerance=slack,
        instance_digest=digest or f"terms={len(sum_)};m={sum_.dimension}",
        grid_provenance=(
            f"{evaluated} rays, x-grid {spec.x_points}^{sum_.dimension} over "
            f"extent {spec.x_extent}, tail target {tail_target:g}{note}"),
    )


def verify_offspectrum_vanishing(sum_: ExponentialSum, gamma_hat: cones.Cone,
                                 probes, a_map: meanvalue.LinearMap,
                                 schedule, digest: str = "") -> VerificationReport:
    """Cube-mean decay at off-spectrum frequencies under the section map A.

    Final magnitude must fall below 0.02 * sum|a_n| and below a tenth of the
    first magnitude.  Probes with a stalled sinc factor are excluded; if all
    stall the report is skipped.
    """
    _require_spectrum_in(sum_, gamma_hat, "the declared cone")
    dual = cones.dual_cone(gamma_hat)
    for j in range(a_map.dimension):
        col = a_map.matrix[:, j]
        if not cones.contains(dual, col, interior=True):
            raise PreconditionError(
                f"operator column {col.tolist()} is not interior to the dual cone")

    total = float(np.sum(np.abs(sum_.coefficients)))
    violation = -math.inf
    stalled = []
    for i, lam in enumerate(probes):
        result = meanvalue.offspectrum_decay_probe(sum_, lam, a_map, schedule)
        if result.stalled:
            stalled.append((i, result.stalled))
            continue
        first, final = result.entries[0][1], result.entries[-1][1]
        violation = max(violation, final - 0.02 * total, final - first / 10.0)

    base_digest = digest or f"terms={len(sum_)};m={sum_.dimension}"
    if violation == -math.inf:
        return make_skipped(
            "offspectrum_vanishing",
            f"all probes have stalled sinc factors: {stalled}", base_digest)
    note = f"; stalled probes {stalled}" if stalled else ""
    return make_report(
        check="offspectrum_vanishing",
        max_violation=violation,
        tolerance=0.0,
        instance_digest=base_digest,
        grid_provenance=f"schedule {list(schedule)}, {len(list(probes))} probes{note}",
    )


def verify_indicator_equality(sum_: ExponentialSum, y_list, radii,
                              spec: SamplingSpec, tol: float = 1e-2,
                              digest: str = "") -> VerificationReport:
    """|regression slope - support-function oracle| <= tol per direction."""
    details, violation = [], -math.inf
    for y in y_list:
        est = p_indicator_estimate(sum_, y, radii, spec)
        violation = max(violation, est.residual)
        details.append(f"y={np.asarray(y).tolist()}: slope={est.slope:.6g} "
                       f"oracle={est.oracle:.6g}")
    return make_report(
        check="indicator_equality",
        max_violation=violation,
        tolerance=tol,
        instance_digest=digest or f"terms={len(sum_)};m={sum_.dimension}",
        grid_provenance="; ".join(details),
    )


def _box_mean_quadrature(sum_: ExponentialSum, width: float, z: TubePoint,
                         quad_points: int) -> complex:
    """Gauss-Legendre tensor quadrature of the box mean of F around z."""
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    t_axis = (nodes + 1.0) * (width / 2.0)
    w_axis = weights / 2.0          # normalized: mean, not integral
    m = sum_.dimension
    if m == 1:
        pts = t_axis[:, None]
        wts = w_axis
    else:
        mesh = np.meshgrid(*([t_axis] * m), indexing="ij")
        pts = np.column_stack([g.ravel() for g in mesh])
        wmesh = np.meshgrid(*([w_axis] * m), indexing="ij")
        wts = np.prod(np.column_stack([g.ravel() for g in wmesh]), axis=1)
    vals = evaluate_grid(sum_, z.x[None, :] + pts, z.y)
    return complex(np.sum(wts * vals))


def verify_smoothing_identity(sum_: ExponentialSum, width: float, z_samples,
                              tol: float = 1e-8, quad_points: int = 48,
                              digest: str = "") -> VerificationReport:
    """Multiplier-based box smoothing vs. quadrature of the defining mean."""
    smoothed = meanvalue.box_smooth(sum_, width)
    violation = 0.0
    if not np.array_equal(smoothed.frequencies, sum_.frequencies):
        violation = math.inf
    for z in z_samples:
        lhs = evaluate(smoothed, z)
        rhs = _box_mean_quadrature(sum_, width, z, quad_points)
        violation = max(violation, abs(lhs - rhs))
    return make_report(
        check="smoothing_identity",
        max_violation=violation,
        tolerance=tol,
        instance_digest=digest or f"terms={len(sum_)};m={sum_.dimension}",
        grid_provenance=(
            f"width {width:.12g}, {len(list(z_samples))} points, "
            f"Gauss-Legendre {quad_points}^{sum_.dimension}"),
    )


def fejer_convergence_check(sum_: ExponentialSum, q_ladder=(4, 16, 64, 256),
                            n_x: int = 1000, x_extent: float = 100.0,
                            seed: int = 0, tol: float = 1e-12,
                            digest: str = "") -> VerificationReport:
    """Damped-sum properties: factor range, majorant bound, monotone error."""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-x_extent / 2.0, x_extent / 2.0, size=(n_x, sum_.dimension))
    y0 = np.zeros(sum_.dimension)
    f_vals = evaluate_grid(sum_, xs, y0)
    abs_coeffs = np.abs(sum_.coefficients)

    violation = 0.0
    errors = []
    for q in q_ladder:
        scheme = fejer.FejerScheme.for_spectrum(sum_.frequencies, q)
        nonzero = np.any(scheme.coords != 0, axis=1)
        violation = max(violation, float(np.max(-scheme.factors, initial=0.0)))
        violation = max(violation, float(np.max(scheme.factors - 1.0, initial=0.0)))
        if np.any(nonzero):
            violation = max(violation, float(
                np.max(scheme.factors[nonzero] - (1.0 - 1.0 / (2.0 * q)))))
        sigma = fejer.bochner_fejer_sum(sum_, q, scheme)
        err = float(np.max(np.abs(evaluate_grid(sigma, xs, y0) - f_vals)))
        bound = float(np.sum(abs_coeffs * (1.0 - scheme.factors)))
        violation = max(violation, err - bound)
        errors.append(err)
    for a, b in zip(errors, errors[1:]):
        violation = max(violation, b - a)

    return make_report(
        check="fejer_convergence",
        max_violation=violation,
        tolerance=tol,
        instance_digest=digest or f"terms={len(sum_)};m={sum_.dimension}",
        grid_provenance=(
            f"q ladder {list(q_ladder)}, {n_x} real samples over extent "
            f"{x_extent}, seed {seed}; errors {['%.3e' % e for e in errors]}"),
    )


# ---------------------------------------------------------------------------
# seeded instance generation
# ---------------------------------------------------------------------------

def _random_unit(rng, m):
    v = rng.standard_normal(m)
    n = np.linalg.norm(v)
    while n < 1e-6:
        v = rng.standard_normal(m)
        n = np.linalg.norm(v)
    return v / n


def random_pointed_cone(rng, m, max_generators=6, min_cos=0.25) -> cones.Cone:
    """Random full-dimensional pointed polyhedral cone (desk-scale)."""
    center = _random_unit(rng, m)
    k = int(rng.integers(2, max_generators + 1)) if m > 1 else 1
    gens = []
    while len(gens) < max(k, m):
        g = center + 0.9 * rng.standard_normal(m)
        g = g / np.linalg.norm(g)
        if g @ center >= min_cos:
            gens.append(g)
    return cones.Cone.polyhedral(generators=gens)


def random_sum_in_cone(rng, cone: cones.Cone, n_terms, freq_scale=3.0,
                       include_zero=False, min_separation=0.05) -> ExponentialSum:
    """Random sum whose spectrum lies in the cone (conic generator combos)."""
    gens = cone.generators
    freqs = []
    if include_zero:
        freqs.append(np.zeros(cone.dimension))
    attempts = 0
    while len(freqs) < n_terms + (1 if include_zero else 0):
        attempts += 1
        if attempts > 200 * n_terms:
            min_separation /= 2.0
            attempts = 0
        w = rng.uniform(0.05, 1.0, size=gens.shape[0])
        lam = (w @ gens) * (freq_scale * rng.uniform(0.25, 1.0) / np.linalg.norm(w @ gens))
        if all(np.linalg.norm(lam - f) >= min_separation for f in freqs):
            freqs.append(lam)
    terms = [
        (lam, rng.uniform(0.3, 1.0) * np.exp(2j * math.pi * rng.uniform()))
        for lam in freqs
    ]
    return ExponentialSum(cone.dimension, terms)


def _interior_direction(rng, cone: cones.Cone):
    """Random unit vector strictly inside a full-dimensional polyhedral cone."""
    gens = cone.generators
    center = np.sum(gens, axis=0)
    center = center / np.linalg.norm(center)
    while True:
        w = rng.uniform(0.2, 1.0, size=gens.shape[0])
        v = w @ gens + 0.5 * np.linalg.norm(w @ gens) * center
        v = v / np.linalg.norm(v)
        if cones.contains(cone, v, interior=True, tol=1e-6):
            return v


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteConfig:
    """Deterministic suite parameters; equal configs give identical reports."""

    seed: int = 0
    instances: int = 4
    dimensions: tuple = (1, 2)
    checks: tuple = FAMILIES
    parallel: bool = False
    x_extent: float = 48.0
    x_points: int = 96

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(int(d) for d in self.dimensions))
        object.__setattr__(self, "checks", tuple(self.checks))
        unknown = [c for c in self.checks if c not in FAMILIES]
        if unknown:
            raise ValueError(f"unknown check families: {unknown}")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if any(d < 1 for d in self.dimensions):
            raise ValueError("dimensions must be positive")


def _family_dimension(config, rng):
    dims = config.dimensions
    return int(dims[rng.integers(0, len(dims))])


def _digest(config, family, index, sum_):
    return (f"seed={config.seed};family={family};instance={index};"
            f"m={sum_.dimension};terms={len(sum_)}")


def _run_max_modulus(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    for i in range(config.instances):
        m = max(2, _family_dimension(config, rng))
        gamma = random_pointed_cone(rng, m)
        sum_ = random_sum_in_cone(rng, gamma, int(rng.integers(2, 7)))
        dual = cones.dual_cone(gamma)
        heights = [np.zeros(m)]
        for t in (0.3, 1.0, 2.5):
            heights.append(t * _interior_direction(rng, dual))
        base = TubeBase.cone(dual)
        if i % 2 == 1:
            # shifted-domain variant, same tolerances
            b = 0.5 * _interior_direction(rng, dual)
            base = TubeBase.shifted_cone(dual, b)
            heights = [b + h for h in heights]
        spec = SamplingSpec(x_extent=config.x_extent, x_points=config.x_points,
                            y_samples=tuple(heights), seed=config.seed)
        reports.append(verify_max_modulus(
            sum_, gamma, spec, base=base,
            digest=_digest(config, "max_modulus", i, sum_)))
    return reports


def _run_convexity(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    for i in range(config.instances):
        m = max(2, _family_dimension(config, rng))
        gamma = random_pointed_cone(rng, m)
        n_terms = 1 if i % 3 == 0 else int(rng.integers(2, 7))
        sum_ = random_sum_in_cone(rng, gamma, n_terms)
        dual = cones.dual_cone(gamma)
        y1 = rng.uniform(0.5, 2.0) * _interior_direction(rng, dual)
        spec = SamplingSpec(x_extent=config.x_extent, x_points=config.x_points,
                            y_samples=(np.zeros(m),), seed=config.seed)
        tol = 1e-12 if n_terms == 1 else GRID_SLACK
        reports.append(verify_convexity(
            sum_, np.zeros(m), y1, n_samples=9, spec=spec, gamma=gamma, tol=tol,
            digest=_digest(config, "convexity", i, sum_)))
    return reports


def _ray_schedule(sum_, u, zero_mask, tail_target=1e-7):
    nz = sum_.frequencies[~zero_mask]
    if nz.shape[0] == 0:
        return np.linspace(1.0, 15.0, 6)
    gap = float(np.min(nz @ u))
    total = float(np.sum(np.abs(sum_.coefficients[~zero_mask])))
    t_end = math.log(max(total, 1e-6) / tail_target) / gap
    return np.geomspace(max(t_end / 64.0, 1e-3), t_end, 8)


def _run_extension_limit(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    for i in range(config.instances):
        m = max(2, _family_dimension(config, rng))
        gamma = random_pointed_cone(rng, m)
        sum_ = random_sum_in_cone(rng, gamma, int(rng.integers(2, 6)),
                                  include_zero=(i % 2 == 0))
        dual = cones.dual_cone(gamma)
        ray_dirs = [_interior_direction(rng, dual) for _ in range(3)]
        gamma_prime = cones.Cone.polyhedral(generators=ray_dirs)
        zero_mask = np.linalg.norm(sum_.frequencies, axis=1) <= DEDUP_TOL
        rays = [(u, _ray_schedule(sum_, u, zero_mask)) for u in ray_dirs]
        offset = None
        if i % 2 == 1:
            offset = 0.3 * _interior_direction(rng, dual)
        spec = SamplingSpec(x_extent=config.x_extent, x_points=config.x_points,
                            y_samples=(np.zeros(m),), seed=config.seed)
        reports.append(verify_extension_limit(
            sum_, gamma, gamma_prime, rays, spec, offset=offset,
            digest=_digest(config, "extension_limit", i, sum_)))
    return reports


def _run_offspectrum(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    for i in range(config.instances):
        m = _family_dimension(config, rng)
        gamma_hat = random_pointed_cone(rng, m)
        dual = cones.dual_cone(gamma_hat)
        while True:
            sum_ = random_sum_in_cone(rng, gamma_hat, int(rng.integers(2, 7)),
                                      min_separation=0.2)
            cols = np.column_stack([_interior_direction(rng, dual)
                                    for _ in range(m)])
            a_map = meanvalue.LinearMap(cols)
            if not a_map.is_nondegenerate(1e-6):
                continue
            probes = []
            for _ in range(3):
                probe = -rng.uniform(0.5, 2.0) * _interior_direction(rng, dual) \
                    + 0.2 * rng.standard_normal(m)
                args = (sum_.frequencies - probe) @ a_map.matrix
                if np.min(np.max(np.abs(args), axis=1)) >= 0.15:
                    probes.append(probe)
            if len(probes) >= 2:
                schedule = [10.0, 1000.0]
                res = [meanvalue.offspectrum_decay_probe(sum_, p, a_map, schedule)
                       for p in probes]
                total = float(np.sum(np.abs(sum_.coefficients)))
                firsts = [r.entries[0][1] for r in res]
                finals = [r.entries[-1][1] for r in res]
                if all(f >= 0.12 * total for f in firsts) and \
                        all(fin <= 0.01 * total for fin in finals):
                    break
        reports.append(verify_offspectrum_vanishing(
            sum_, gamma_hat, probes, a_map, schedule,
            digest=_digest(config, "offspectrum_vanishing", i, sum_)))
    return reports


def random_gapped_indicator_instance(rng, m, n_terms, r_max=1000.0,
                                     gap=0.1, span=0.65):
    """Sum plus direction with well-separated <y, lambda_n> projections.

    Projections are spaced by at least ``gap`` and bounded by ``span`` so the
    radius schedule stays inside the overflow budget at r_max.
    """
    y = rng.uniform(0.5, 1.5) * _random_unit(rng, m)
    y_hat = y / float(y @ y)
    levels = []
    while len(levels) < n_terms:
        v = rng.uniform(-span, span)
        if all(abs(v - u) >= gap * 1.1 for u in levels):
            levels.append(v)
    freqs = []
    for v in levels:
        w = rng.standard_normal(m)
        w -= (w @ y) * y / float(y @ y)
        freqs.append(v * y_hat + w)
    terms = [(lam, rng.uniform(0.3, 1.0) * np.exp(2j * math.pi * rng.uniform()))
             for lam in freqs]
    assert r_max * max(abs(lv) for lv in levels) <= 700.0
    return ExponentialSum(m, terms), y


def _run_indicator(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    radii = np.geomspace(1.0, 1000.0, 16)
    for i in range(config.instances):
        m = _family_dimension(config, rng)
        n_terms = 1 if i % 3 == 0 else int(rng.integers(2, 7))
        sum_, y = random_gapped_indicator_instance(rng, m, n_terms)
        spec = SamplingSpec(x_extent=16.0, x_points=8, seed=config.seed)
        reports.append(verify_indicator_equality(
            sum_, [y], radii, spec,
            digest=_digest(config, "indicator_equality", i, sum_)))
    return reports


def _run_smoothing(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    for i in range(config.instances):
        m = _family_dimension(config, rng)
        n_terms = int(rng.integers(1, 7))
        terms = [(rng.uniform(-3.0, 3.0, size=m),
                  rng.uniform(0.3, 1.0) * np.exp(2j * math.pi * rng.uniform()))
                 for _ in range(n_terms)]
        sum_ = ExponentialSum(m, terms)
        width = float(rng.uniform(0.4, 2.0))
        while True:
            try:
                meanvalue.box_smooth(sum_, width)
                break
            except meanvalue.InadmissibleWidthError:
                width *= 1.0 + 1e-3
        zs = [TubePoint(rng.uniform(-5.0, 5.0, size=m),
                        rng.uniform(-0.4, 0.4, size=m)) for _ in range(20)]
        reports.append(verify_smoothing_identity(
            sum_, width, zs, digest=_digest(config, "smoothing_identity", i, sum_)))
    return reports


def _run_fejer(config, seedseq):
    rng = np.random.default_rng(seedseq)
    reports = []
    for i in range(config.instances):
        m = _family_dimension(config, rng)
        n_terms = int(rng.integers(2, 8))
        if i % 3 == 0 and m == 1:
            # commensurable: integer multiples of a random base value
            beta = rng.uniform(0.4, 2.0)
            ints = rng.choice(np.arange(-8, 9), size=n_terms, replace=False)
            freqs = [np.array([beta * k]) for k in ints]
        else:
            freqs = [rng.uniform(-3.0, 3.0, size=m) for _ in range(n_terms)]
        terms = [(lam, rng.uniform(0.3, 1.0) * np.exp(2j * math.pi * rng.uniform()))
                 for lam in freqs]
        sum_ = ExponentialSum(m, terms)
        reports.append(fejer_convergence_check(
            sum_, seed=config.seed + i,
            digest=_digest(config, "fejer_convergence", i, sum_)))
    return reports


_RUNNERS = {
    "convexity": _run_convexity,
    "extension_limit": _run_extension_limit,
    "fejer_convergence": _run_fejer,
    "indicator_equality": _run_indicator,
    "max_modulus": _run_max_modulus,
    "offspectrum_vanishing": _run_offspectrum,
    "smoothing_identity": _run_smoothing,
}


def run_suite(config: SuiteConfig) -> list[VerificationReport]:
    """Run the configured check families on seeded random instances.

    A pure function of the config: per-family seed streams are spawned from
    the root seed in canonical family order, so reports are byte-identical
    across runs and under parallel execution.
    """
    children = dict(zip(FAMILIES, np.random.SeedSequence(config.seed).spawn(
        len(FAMILIES))))
    jobs = [(name, children[name]) for name in config.checks]
    if config.parallel and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(
                lambda job: _RUNNERS[job[0]](config, job[1]), jobs))
    else:
        results = [_RUNNERS[name](config, seed) for name, seed in jobs]
    return [report for family in results for report in family]
