"""Bochner-Fejer summation for finite exponential sums.

A damped partial sum sigma_q keeps every spectrum point but multiplies the
n-th coefficient by a factor k_n^q in [0, 1).  The factors come from writing
each frequency as an integer combination of a small rational base,

    lambda_n = sum_j r_nj * beta_j,    r_nj integer,

and taking the product of triangular (Fejer) windows per base element:

    k_n^q = prod_j max(0, 1 - |r_nj| / q).

In the commensurable one-dimensional case this reproduces the classical
Fejer coefficients 1 - |p|/q exactly; in general it satisfies the properties
the summation method needs: 0 <= k_n^q <= 1, strictly below 1 whenever some
coordinate is nonzero, monotone toward 1 as q grows, and spectrum-preserving
(damped terms are dropped only when the factor vanishes).

The base extraction searches for integer relations through continued
fractions of coefficient ratios (denominators up to 10^6).  Frequencies
without a detectable small-integer relation become base vectors of their
own; for spectra that are irrationally related yet rationally dependent this
can overcount the base, which affects minimality only, never reconstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .expsum import ExponentialSum, _as_vector

#: Largest denominator tried by the continued-fraction relation search.
MAX_DENOMINATOR = 10 ** 6

#: Integer coordinates beyond this are treated as "no small relation".
MAX_COORDINATE = 2 ** 53

#: Default reconstruction tolerance.
BASE_TOL = 1e-9


class RationalBaseError(ValueError):
    """No admissible base reconstructs the spectrum within tolerance."""


@dataclass(frozen=True)
class FejerScheme:
    """Rational base, integer coordinates and damping factors of order q."""

    base: np.ndarray       # (k, m)
    coords: np.ndarray     # (n, k) integer
    order: int
    factors: np.ndarray    # (n,)

    def __post_init__(self):
        base = np.ascontiguousarray(self.base, dtype=float)
        coords = np.ascontiguousarray(self.coords, dtype=np.int64)
        factors = np.ascontiguousarray(self.factors, dtype=float)
        for arr in (base, coords, factors):
            arr.flags.writeable = False
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "factors", factors)
        if self.order < 1:
            raise ValueError("order must be a positive integer")
        if coords.shape[0] != factors.shape[0]:
            raise ValueError("coords / factors length mismatch")
        if coords.shape[1] != base.shape[0]:
            raise ValueError("coords width must match the base size")

    def reconstruct(self):
        """Frequencies sum_j r_nj beta_j implied by the scheme."""
        return self.coords @ self.base

    @classmethod
    def for_spectrum(cls, spectrum, q, tol=BASE_TOL):
        base, coords = rational_base(spectrum, tol)
        return cls(base=base, coords=coords, order=int(q),
                   factors=fejer_factors(coords, q))


def _rationalize(value, rtol=1e-9):
    """Fraction p/q (q <= MAX_DENOMINATOR) if it matches 'exactly'.

    The acceptance window shrinks with q: |value - p/q| <= rtol*max(1,|value|)/q.
    A loose fixed window would mistake good continued-fraction convergents of
    irrationals (e.g. sqrt(2) ~ 47321/33461 to 6e-10) for true relations.
    """
    frac = Fraction(value).limit_denominator(MAX_DENOMINATOR)
    if abs(value - float(frac)) <= rtol * max(1.0, abs(value)) / frac.denominator:
        return frac
    return None


def rational_base(spectrum, tol=BASE_TOL):
    """Minimal-effort rational base and integer coordinates for a spectrum.

    Returns (base, coords) with base of shape (k, m), coords integer of shape
    (n, k) and ||lambda_n - coords[n] @ base|| <= tol for every n.

    Frequencies are processed in the given order.  Each one is projected on
    the current base; rational projection coefficients (continued-fraction
    search, denominators <= 10^6) refine the base by the denominators found,
    anything else opens a new base vector.
    """
    spectrum = np.atleast_2d(np.asarray(spectrum, dtype=float))
    if spectrum.size == 0:
        raise RationalBaseError("empty spectrum")
    n, m = spectrum.shape

    base = []          # list of m-vectors
    rows = []          # per processed frequency: list of integer coords

    for idx in range(n):
        lam = spectrum[idx]
        if np.linalg.norm(lam) <= tol:
            rows.append([0] * len(base))
            continue
        if not base:
            base.append(lam.copy())
            rows.append([1])
            continue

        b_mat = np.asarray(base, dtype=float).T        # m x k
        coeffs, fracs, residual = None, None, None
        rank = np.linalg.matrix_rank(b_mat, tol=max(tol, 1e-12))
        if rank == len(base):
            coeffs, *_ = np.linalg.lstsq(b_mat, lam, rcond=None)
            residual = lam - b_mat @ coeffs
            fracs = [Fraction(0) if abs(c) <= tol else _rationalize(float(c))
                     for c in coeffs]
            if any(f is None for f in fracs):
                fracs = None
        else:
            # Base is R-dependent (irrational relations present): projection
            # coefficients are not unique, fall back to per-ray ratios.
            for j, b in enumerate(base):
                scale = float(lam @ b) / float(b @ b)
                if np.linalg.norm(lam - scale * b) <= tol:
                    frac = _rationalize(scale)
                    if frac is not None:
                        fracs = [Fraction(0)] * len(base)
                        fracs[j] = frac
                        residual = np.zeros(m)
                        break

        if fracs is None:
            # no small-integer relation: own base vector
            base.append(lam.copy())
            rows.append([0] * (len(base) - 1) + [1])
            continue

        in_span = residual is not None and np.linalg.norm(residual) <= tol
        if not in_span:
            base.append(lam.copy())
            rows.append([0] * (len(base) - 1) + [1])
            continue

        # refine base columns by the denominators, keeping old rows integral
        new_row = []
        for j, frac in enumerate(fracs):
            q_j = frac.denominator
            if q_j > 1:
                if any(abs(row[j]) * q_j > MAX_COORDINATE
                       for row in rows if j < len(row)):
                    raise RationalBaseError(
                        f"coordinate overflow while placing frequency "
                        f"{lam.tolist()} (index {idx})")
                base[j] = base[j] / q_j
                for row in rows:
                    if j < len(row):
                        row[j] *= q_j
            new_row.append(int(frac.numerator))
        rows.append(new_row)

    k = len(base)
    coords = np.zeros((n, k), dtype=np.int64)
    for i, row in enumerate(rows):
        coords[i, : len(row)] = row
    base_arr = np.asarray(base, dtype=float).reshape(k, m)

    err = np.linalg.norm(spectrum - coords @ base_arr, axis=1)
    if np.any(err > tol):
        worst = int(np.argmax(err))
        raise RationalBaseError(
            f"reconstruction error {err[worst]:.3g} > {tol:g} at frequency "
            f"{spectrum[worst].tolist()}")
    return base_arr, coords


def fejer_factors(coords, q):
    """Damping factors prod_j max(0, 1 - |r_j|/q) per coordinate row."""
    if q != int(q) or q < 1:
        raise ValueError("q must be a positive integer")
    coords = np.asarray(coords, dtype=float)
    return np.prod(np.maximum(0.0, 1.0 - np.abs(coords) / float(q)), axis=1)


def bochner_fejer_sum(sum_: ExponentialSum, q, scheme: FejerScheme | None = None
                      ) -> ExponentialSum:
    """Damped partial sum sigma_q; q = math.inf returns the sum unchanged.

    A supplied scheme must reconstruct the sum's spectrum (its base and
    coordinates are reused; factors are taken at its stored order, which must
    equal q).
    """
    if q == math.inf:
        return sum_
    if q != int(q) or q < 1:
        raise ValueError("q must be a positive integer or math.inf")
    q = int(q)
    if len(sum_) == 0:
        return sum_

    if scheme is None:
        scheme = FejerScheme.for_spectrum(sum_.frequencies, q)
    else:
        if scheme.order != q:
            raise ValueError(f"scheme order {scheme.order} != q = {q}")
        err = np.linalg.norm(scheme.reconstruct() - sum_.frequencies, axis=1)
        if scheme.coords.shape[0] != len(sum_) or np.any(err > BASE_TOL):
            raise RationalBaseError("scheme does not reconstruct the spectrum")

    terms = [
        (lam, a * k)
        for (lam, a), k in zip(sum_.terms(), scheme.factors)
        if k > 0.0
    ]
    return ExponentialSum(sum_.dimension, terms)
