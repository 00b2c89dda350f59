"""Finite exponential sums on C^m.

An :class:`ExponentialSum` is a finite sum

    F(z) = sum_n  a_n * exp(i <z, lambda_n>),   z = x + iy in C^m,

with frequency vectors lambda_n in R^m and complex coefficients a_n.
On a tube point z = x + iy the n-th term has modulus |a_n| * exp(-<y, lambda_n>),
so evaluation is only meaningful where none of the exponents -<y, lambda_n>
exceeds the binary64 overflow budget; out-of-domain evaluation raises
:class:`GrowthOverflowError` instead of producing infinities.

Sums are immutable and kept in a canonical form (frequencies merged within a
dedup tolerance, terms sorted lexicographically by frequency), which makes
equality, hashing of the byte image, and term-ordered summation deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

#: Frequencies closer than this (Euclidean) are merged at construction.
DEDUP_TOL = 1e-12

#: Largest admissible value of -<y, lambda_n>; exp(700) is near the float64 max.
EXP_OVERFLOW_LIMIT = 700.0


class DimensionMismatchError(ValueError):
    """Operands live in different ambient dimensions."""


class GrowthOverflowError(ValueError):
    """Evaluation requested outside the sum's domain of boundedness."""


def _as_vector(v, m=None, name="vector"):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if m is not None and arr.shape[0] != m:
        raise DimensionMismatchError(
            f"{name} has length {arr.shape[0]}, expected {m}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class TubePoint:
    """Point z = x + iy of a tube set, stored as the real pair (x, y)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _as_vector(self.x, name="x")
        y = _as_vector(self.y, m=x.shape[0], name="y")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def dimension(self) -> int:
        return self.x.shape[0]


class ExponentialSum:
    """Canonical finite exponential sum sum_n a_n exp(i<z, lambda_n>).

    Parameters
    ----------
    dimension : int
        Ambient dimension m >= 1.
    terms : iterable of (frequency, coefficient)
        Frequencies are length-m real vectors, coefficients complex.
        Frequencies within ``dedup_tol`` of each other are merged by adding
        their coefficients; afterwards terms with |a_n| < ``prune_tol`` are
        dropped and the rest sorted lexicographically by frequency.
    """

    __slots__ = ("dimension", "frequencies", "coefficients")

    def __init__(self, dimension, terms=(), *, dedup_tol=DEDUP_TOL, prune_tol=0.0):
        if int(dimension) != dimension or dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {dimension}")
        dimension = int(dimension)

        freqs, coeffs = [], []
        for lam, a in terms:
            freqs.append(_as_vector(lam, m=dimension, name="frequency"))
            a = complex(a)
            if not (np.isfinite(a.real) and np.isfinite(a.imag)):
                raise ValueError("coefficient has non-finite entries")
            coeffs.append(a)

        lam_arr = np.array(freqs, dtype=float).reshape(len(freqs), dimension)
        a_arr = np.array(coeffs, dtype=complex)
        lam_arr, a_arr = _canonicalize(lam_arr, a_arr, dedup_tol, prune_tol)

        lam_arr.flags.writeable = False
        a_arr.flags.writeable = False
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "frequencies", lam_arr)
        object.__setattr__(self, "coefficients", a_arr)

    def __setattr__(self, name, value):
        raise AttributeError("ExponentialSum is immutable")

    # -- basic protocol ----------------------------------------------------

    def __len__(self):
        return self.frequencies.shape[0]

    def terms(self):
        """Iterate (frequency, coefficient) pairs in canonical order."""
        for lam, a in zip(self.frequencies, self.coefficients):
            yield lam, complex(a)

    def __eq__(self, other):
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return (self.dimension == other.dimension
                and self.frequencies.shape == other.frequencies.shape
                and np.array_equal(self.frequencies, other.frequencies)
                and np.array_equal(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((self.dimension, self.frequencies.tobytes(),
                     self.coefficients.tobytes()))

    def __repr__(self):
        return (f"ExponentialSum(dimension={self.dimension}, "
                f"n_terms={len(self)})")

    def __add__(self, other):
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        if other.dimension != self.dimension:
            raise DimensionMismatchError(
                f"cannot add sums of dimension {self.dimension} and {other.dimension}")
        return ExponentialSum(
            self.dimension,
            list(self.terms()) + list(other.terms()))

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return self + (-other)

    def scaled(self, factor):
        """Sum with every coefficient multiplied by ``factor``."""
        factor = complex(factor)
        return ExponentialSum(
            self.dimension,
            [(lam, a * factor) for lam, a in self.terms()])

    # -- serialization ------------------------------------------------------

    def to_json_dict(self):
        return {
            "dimension": self.dimension,
            "terms": [
                {"lambda": [float(c) for c in lam], "re": a.real, "im": a.imag}
                for lam, a in self.terms()
            ],
        }

    def dumps(self, **kwargs):
        return json.dumps(self.to_json_dict(), **kwargs)

    @classmethod
    def from_json_dict(cls, doc):
        try:
            dimension = doc["dimension"]
            terms = [(t["lambda"], complex(t["re"], t["im"])) for t in doc["terms"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed exponential-sum document: {exc}") from exc
        return cls(dimension, terms)

    @classmethod
    def loads(cls, text):
        return cls.from_json_dict(json.loads(text))


def _canonicalize(lam, a, dedup_tol, prune_tol):
    """Merge near-duplicate frequencies, prune, and sort lexicographically."""
    n = lam.shape[0]
    if n > 1:
        # Union-find over pairs closer than dedup_tol; representative is the
        # lexicographically smallest member of each cluster.
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        d2 = np.sum((lam[:, None, :] - lam[None, :, :]) ** 2, axis=-1)
        tol2 = dedup_tol * dedup_tol
        for i in range(n):
            for j in range(i + 1, n):
                if d2[i, j] <= tol2:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)

        order = np.lexsort(lam.T[::-1])
        merged = {}
        for idx in order:
            root = find(idx)
            if root in merged:
                merged[root] = (merged[root][0], merged[root][1] + a[idx])
            else:
                merged[root] = (lam[idx], a[idx])
        lam = np.array([v[0] for v in merged.values()], dtype=float).reshape(-1, lam.shape[1])
        a = np.array([v[1] for v in merged.values()], dtype=complex)

    if prune_tol > 0 and lam.shape[0]:
        keep = np.abs(a) >= prune_tol
        lam, a = lam[keep], a[keep]

    if lam.shape[0]:
        order = np.lexsort(lam.T[::-1])
        lam, a = np.ascontiguousarray(lam[order]), np.ascontiguousarray(a[order])
    return lam, a


def _check_growth(sum_, y):
    """Raise unless -<y, lambda_n> <= EXP_OVERFLOW_LIMIT for every term."""
    if len(sum_) == 0:
        return np.zeros(0)
    exponents = -(sum_.frequencies @ y)
    worst = float(np.max(exponents))
    if worst > EXP_OVERFLOW_LIMIT:
        raise GrowthOverflowError(
            f"exponent -<y, lambda> = {worst:.3g} exceeds {EXP_OVERFLOW_LIMIT:g}; "
            "the point lies outside the sum's domain of boundedness")
    return exponents


def evaluate(sum_: ExponentialSum, z: TubePoint) -> complex:
    """Evaluate F(z) = sum_n a_n exp(-<y, lambda_n>) exp(i<x, lambda_n>).

    Terms are accumulated in canonical order, so the result is deterministic
    for a given canonical sum.
    """
    if z.dimension != sum_.dimension:
        raise DimensionMismatchError(
            f"point dimension {z.dimension} != sum dimension {sum_.dimension}")
    exponents = _check_growth(sum_, z.y)
    total = 0j
    for k in range(len(sum_)):
        phase = float(sum_.frequencies[k] @ z.x)
        total += complex(sum_.coefficients[k]) * np.exp(exponents[k]) \
            * complex(np.cos(phase), np.sin(phase))
    return total


def evaluate_grid(sum_: ExponentialSum, x_points: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate F(x + iy) for many real parts at a fixed height.

    ``x_points`` has shape (p, m); returns a length-p complex array.  The term
    accumulation order matches :func:`evaluate`.
    """
    x_points = np.asarray(x_points, dtype=float)
    if x_points.ndim != 2 or x_points.shape[1] != sum_.dimension:
        raise DimensionMismatchError(
            f"x_points must have shape (p, {sum_.dimension})")
    y = _as_vector(y, m=sum_.dimension, name="y")
    exponents = _check_growth(sum_, y)
    out = np.zeros(x_points.shape[0], dtype=complex)
    for k in range(len(sum_)):
        phases = x_points @ sum_.frequencies[k]
        out += (sum_.coefficients[k] * np.exp(exponents[k])) * np.exp(1j * phases)
    return out


def modulate(sum_: ExponentialSum, shift, scale) -> ExponentialSum:
    """Shift every frequency by ``shift`` and scale every coefficient.

    (lambda_n, a_n) -> (lambda_n + shift, scale * a_n); the result is
    re-canonicalized.
    """
    shift = _as_vector(shift, m=sum_.dimension, name="shift")
    scale = complex(scale)
    return ExponentialSum(
        sum_.dimension,
        [(lam + shift, a * scale) for lam, a in sum_.terms()])


def majorant(sum_: ExponentialSum, y) -> float:
    """sum_n |a_n| exp(-<y, lambda_n>), a bound for |F(x+iy)| uniform in x."""
    y = _as_vector(y, m=sum_.dimension, name="y")
    exponents = _check_growth(sum_, y)
    total = 0.0
    for k in range(len(sum_)):
        total += abs(sum_.coefficients[k]) * np.exp(exponents[k])
    return float(total)


def exponential_type(sum_: ExponentialSum) -> float:
    """max_n ||lambda_n|| (Euclidean); 0 for the empty sum."""
    if len(sum_) == 0:
        return 0.0
    return float(np.max(np.linalg.norm(sum_.frequencies, axis=1)))
