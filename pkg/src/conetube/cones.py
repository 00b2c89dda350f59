"""Convex closed cones and conjugate (dual) cones.

Two concrete representations cover everything the library needs:

* polyhedral cones, carrying both a V-description (unit generators) and an
  H-description (halfspace normals n_i, meaning {y : <n_i, y> >= 0}),
* circular cones {v : <axis, v> >= delta * ||v||} with unit axis and
  aperture parameter delta in [0, 1],

plus the degenerate kinds ``full`` (R^m) and ``zero`` ({0}) so that the
dual-cone map is total: dual(full) = zero, dual(zero) = full.

Polyhedral duals are computed by the incremental double description method.
Construction canonicalizes: generators are reduced to the extreme rays of the
cone they span (with the lineality space, if any, contributing a plus/minus
pair per basis vector), unit-normalized, and sorted lexicographically.  On
canonical cones the conjugation map is an involution, matching the identity
dual(dual(C)) = C for closed convex cones.
"""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

from .expsum import DimensionMismatchError, _as_vector

#: Default geometric tolerance for membership / consistency checks.
GEOM_TOL = 1e-9

#: Tolerance used inside the double description sweep.
_DD_TOL = 1e-10

#: Double description is rejected above this ambient dimension.
MAX_DD_DIMENSION = 8


class ConeError(ValueError):
    """Invalid cone construction or unsupported cone operation."""


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------

def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _double_description(normals, m, tol=_DD_TOL):
    """Extreme rays of the cone {y in R^m : <n, y> >= 0 for all n in normals}.

    Incremental double description with explicit lineality handling.  The
    running cone is span(lineality) + cone(rays); constraints are added one at
    a time.  While a lineality vector l0 with <n, l0> != 0 exists the cone is
    sliced by moving l0 to the ray list; otherwise rays are split by the sign
    of <n, r> and adjacent (+,-) pairs are combined.

    Returns (lineality, rays): lists of unit vectors.  All returned rays are
    extreme modulo the lineality space.
    """
    lineality = [np.eye(m)[i] for i in range(m)]
    rays = []
    processed = []

    def active_set(r):
        return frozenset(
            i for i, n in enumerate(processed) if abs(float(n @ r)) <= 10 * tol)

    for raw in normals:
        n = np.asarray(raw, dtype=float)
        if np.linalg.norm(n) <= tol:
            continue
        n = _unit(n)

        lin_dots = [float(n @ l) for l in lineality]
        if lineality and max(abs(d) for d in lin_dots) > tol:
            # Slice the lineality space: l0 becomes a ray, the rest of the
            # lineality basis and all rays are projected into {<n, .> = 0}.
            i0 = max(range(len(lineality)), key=lambda i: abs(lin_dots[i]))
            l0 = lineality[i0] if lin_dots[i0] > 0 else -lineality[i0]
            d0 = abs(lin_dots[i0])
            new_lin = []
            for i, l in enumerate(lineality):
                if i == i0:
                    continue
                proj = l - (float(n @ l) / d0) * l0
                if np.linalg.norm(proj) > tol:
                    new_lin.append(_unit(proj))
            lineality = new_lin
            rays = [_unit(r - (float(n @ r) / d0) * l0) for r in rays]
            rays.append(l0)
        else:
            dots = [float(n @ r) for r in rays]
            pos = [i for i, d in enumerate(dots) if d > tol]
            neg = [i for i, d in enumerate(dots) if d < -tol]
            zer = [i for i, d in enumerate(dots) if -tol <= d <= tol]
            if neg:
                actives = {i: active_set(rays[i]) for i in range(len(rays))}
                new_rays = [rays[i] for i in pos + zer]
                for ip, im_ in itertools.product(pos, neg):
                    common = actives[ip] & actives[im_]
                    adjacent = True
                    for k in range(len(rays)):
                        if k in (ip, im_):
                            continue
                        if common <= actives[k]:
                            adjacent = False
                            break
                    if adjacent:
                        w = dots[ip] * rays[im_] - dots[im_] * rays[ip]
                        nw = np.linalg.norm(w)
                        if nw > tol:
                            new_rays.append(w / nw)
                rays = new_rays
        processed.append(n)

    return lineality, rays


def _dedup_rows(rows, tol):
    out = []
    for r in rows:
        if not any(np.linalg.norm(r - o) <= tol for o in out):
            out.append(r)
    return out


def _canonical_rays(lineality, rays, m, tol=GEOM_TOL):
    """Deterministic generator set for span(lineality) + cone(rays).

    The lineality space contributes a sign-fixed orthonormal basis, included
    with both signs; rays are projected orthogonally to the lineality space
    (extreme rays are unique only modulo it), unit-normalized, deduplicated
    and sorted lexicographically.
    """
    gens = []
    basis = np.zeros((0, m))
    if lineality:
        u, s, vt = np.linalg.svd(np.asarray(lineality, dtype=float))
        rank = int(np.sum(s > tol))
        basis = vt[:rank]
        for i in range(rank):
            # sign fix: first component of significant magnitude positive
            b = basis[i]
            lead = np.flatnonzero(np.abs(b) > tol)[0]
            if b[lead] < 0:
                basis[i] = -b
        gens.extend(basis)
        gens.extend(-b for b in basis)

    for r in rays:
        if basis.shape[0]:
            r = r - basis.T @ (basis @ r)
        norm = np.linalg.norm(r)
        if norm > tol:
            gens.append(r / norm)

    gens = _dedup_rows(gens, tol)
    if not gens:
        return np.zeros((0, m))
    arr = np.array(gens, dtype=float)
    order = np.lexsort(arr.T[::-1])
    return np.ascontiguousarray(arr[order])


def _lineality_dimension(lineality, tol=GEOM_TOL):
    if not lineality:
        return 0
    s = np.linalg.svd(np.asarray(lineality, dtype=float), compute_uv=False)
    return int(np.sum(s > tol))


# ---------------------------------------------------------------------------
# Cone
# ---------------------------------------------------------------------------

class Cone:
    """A convex closed cone containing the origin.

    Use the factory classmethods :meth:`polyhedral`, :meth:`circular`,
    :meth:`full` and :meth:`zero`; the raw constructor is internal.
    """

    __slots__ = ("dimension", "kind", "generators", "halfspaces", "axis", "delta")

    def __init__(self, dimension, kind, generators=None, halfspaces=None,
                 axis=None, delta=None):
        object.__setattr__(self, "dimension", int(dimension))
        object.__setattr__(self, "kind", kind)
        for name, value in (("generators", generators), ("halfspaces", halfspaces)):
            if value is not None:
                value = np.ascontiguousarray(value, dtype=float)
                value.flags.writeable = False
            object.__setattr__(self, name, value)
        if axis is not None:
            axis = np.ascontiguousarray(axis, dtype=float)
            axis.flags.writeable = False
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "delta", None if delta is None else float(delta))

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    # -- factories -----------------------------------------------------------

    @classmethod
    def polyhedral(cls, generators=None, halfspaces=None, dimension=None):
        """Cone from generators (V-description) or halfspace normals.

        Exactly one of ``generators`` / ``halfspaces`` must be given.  The
        stored descriptions are canonical: generators are the extreme rays of
        the cone (plus a sign pair per lineality direction) and halfspaces the
        extreme rays of the conjugate cone.  Degenerate inputs collapse to the
        ``full`` or ``zero`` kinds.
        """
        if (generators is None) == (halfspaces is None):
            raise ConeError("specify exactly one of generators / halfspaces")
        seed = generators if generators is not None else halfspaces
        seed = np.atleast_2d(np.asarray(seed, dtype=float))
        if seed.ndim != 2 or seed.size == 0:
            raise ConeError("description must be a nonempty list of vectors")
        m = dimension if dimension is not None else seed.shape[1]
        if seed.shape[1] != m:
            raise DimensionMismatchError(
                f"vectors of length {seed.shape[1]}, expected {m}")
        if m < 1:
            raise ConeError("dimension must be >= 1")
        if m > MAX_DD_DIMENSION:
            raise ConeError(
                f"double description not supported above dimension {MAX_DD_DIMENSION}")
        if not np.all(np.isfinite(seed)):
            raise ConeError("description has non-finite entries")
        if generators is not None and np.any(np.linalg.norm(seed, axis=1) <= GEOM_TOL):
            raise ConeError("generators must be nonzero")

        if generators is not None:
            halves = _canonical_rays(*_double_description(seed, m), m)
            gens = _canonical_rays(*_double_description(halves, m), m)
        else:
            gens_lin, gens_rays = _double_description(seed, m)
            gens = _canonical_rays(gens_lin, gens_rays, m)
            halves = _canonical_rays(*_double_description(gens, m), m)

        return cls._from_canonical(m, gens, halves)

    @classmethod
    def _from_canonical(cls, m, gens, halves):
        if gens.shape[0] == 0:
            return cls.zero(m)
        if halves.shape[0] == 0:
            return cls.full(m)
        cone = cls(m, "polyhedral", generators=gens, halfspaces=halves)
        cone._validate()
        return cone

    @classmethod
    def circular(cls, axis, delta):
        axis = _as_vector(axis, name="axis")
        norm = np.linalg.norm(axis)
        if abs(norm - 1.0) > 1e-12:
            if norm <= GEOM_TOL:
                raise ConeError("axis must be nonzero")
            axis = axis / norm
        delta = float(delta)
        if not 0.0 <= delta <= 1.0:
            raise ConeError(f"delta must lie in [0, 1], got {delta}")
        return cls(axis.shape[0], "circular", axis=axis, delta=delta)

    @classmethod
    def full(cls, dimension):
        return cls(dimension, "full")

    @classmethod
    def zero(cls, dimension):
        return cls(dimension, "zero")

    def _validate(self):
        if self.kind == "polyhedral":
            prods = self.generators @ self.halfspaces.T
            worst = float(np.min(prods)) if prods.size else 0.0
            if worst < -GEOM_TOL:
                raise ConeError(
                    f"inconsistent polyhedral descriptions: <n, g> = {worst:.3g}")

    # -- basic protocol -------------------------------------------------------

    def __repr__(self):
        if self.kind == "polyhedral":
            return (f"Cone.polyhedral(m={self.dimension}, "
                    f"generators={self.generators.shape[0]}, "
                    f"halfspaces={self.halfspaces.shape[0]})")
        if self.kind == "circular":
            return f"Cone.circular(axis={self.axis.tolist()}, delta={self.delta})"
        return f"Cone.{self.kind}({self.dimension})"

    def isclose(self, other, tol=GEOM_TOL):
        """Structural equality: same kind, matching canonical data within tol."""
        if self.kind != other.kind or self.dimension != other.dimension:
            return False
        if self.kind == "polyhedral":
            return _row_sets_close(self.generators, other.generators, tol)
        if self.kind == "circular":
            return (np.linalg.norm(self.axis - other.axis) <= tol
                    and abs(self.delta - other.delta) <= tol)
        return True

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self):
        doc = {"dimension": self.dimension, "kind": self.kind}
        if self.kind == "polyhedral":
            doc["generators"] = self.generators.tolist()
            doc["halfspaces"] = self.halfspaces.tolist()
        elif self.kind == "circular":
            doc["axis"] = self.axis.tolist()
            doc["delta"] = self.delta
        return doc

    def dumps(self, **kwargs):
        return json.dumps(self.to_json_dict(), **kwargs)

    @classmethod
    def from_json_dict(cls, doc):
        try:
            kind = doc["kind"]
            m = doc["dimension"]
        except (KeyError, TypeError) as exc:
            raise ConeError(f"malformed cone document: {exc}") from exc
        if kind == "polyhedral":
            if "generators" in doc:
                return cls.polyhedral(generators=doc["generators"], dimension=m)
            if "halfspaces" in doc:
                return cls.polyhedral(halfspaces=doc["halfspaces"], dimension=m)
            raise ConeError("polyhedral cone document lacks both descriptions")
        if kind == "circular":
            return cls.circular(doc["axis"], doc["delta"])
        if kind == "full":
            return cls.full(m)
        if kind == "zero":
            return cls.zero(m)
        raise ConeError(f"unknown cone kind {kind!r}")

    @classmethod
    def loads(cls, text):
        return cls.from_json_dict(json.loads(text))


def _row_sets_close(a, b, tol):
    if a.shape != b.shape:
        return False
    used = [False] * b.shape[0]
    for row in a:
        hit = False
        for j in range(b.shape[0]):
            if not used[j] and np.linalg.norm(row - b[j]) <= tol:
                used[j] = True
                hit = True
                break
        if not hit:
            return False
    return True


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def dual_cone(cone: Cone) -> Cone:
    """Conjugate cone {t : <t, y> >= 0 for all y in the cone}.

    Polyhedral: the dual's halfspace normals are exactly the primal
    generators; its generators come from double description.  Circular with
    aperture delta: circular with the same axis and aperture sqrt(1-delta^2).
    full and zero swap.  On canonical cones the map is an involution.
    """
    if cone.kind == "full":
        return Cone.zero(cone.dimension)
    if cone.kind == "zero":
        return Cone.full(cone.dimension)
    if cone.kind == "circular":
        return Cone.circular(cone.axis, math.sqrt(max(0.0, 1.0 - cone.delta ** 2)))
    m = cone.dimension
    if m > MAX_DD_DIMENSION:
        raise ConeError(
            f"double description not supported above dimension {MAX_DD_DIMENSION}")
    gens = _canonical_rays(*_double_description(cone.generators, m), m)
    return Cone._from_canonical(m, gens, np.array(cone.generators))


def contains(cone: Cone, v, interior: bool = False, tol: float = GEOM_TOL) -> bool:
    """Membership test; ``interior=True`` uses strict inequalities.

    The origin is always a member and is interior only for the full cone.
    """
    v = _as_vector(v, m=cone.dimension, name="v")
    norm = float(np.linalg.norm(v))
    if cone.kind == "full":
        return True
    if norm <= tol:
        return not interior
    if cone.kind == "zero":
        return False
    if cone.kind == "circular":
        d = float(cone.axis @ v)
        if interior:
            return d > (cone.delta + tol) * norm
        return d >= (cone.delta - tol) * norm
    prods = cone.halfspaces @ v
    if interior:
        return bool(np.all(prods > tol * norm))
    return bool(np.all(prods >= -tol * norm))


def _circular_boundary_directions(cone: Cone, n_dirs: int):
    """Unit vectors at angle arccos(delta) from the axis (boundary of the cone)."""
    m, u, delta = cone.dimension, cone.axis, cone.delta
    sin_part = math.sqrt(max(0.0, 1.0 - delta ** 2))
    if m == 1 or sin_part == 0.0:
        return u[None, :]
    # orthonormal basis of the axis complement
    basis = np.linalg.svd(np.eye(m) - np.outer(u, u))[0][:, : m - 1].T
    if m == 2:
        circle = np.array([[1.0], [-1.0]])
    elif m == 3:
        phi = np.linspace(0.0, 2.0 * math.pi, n_dirs, endpoint=False)
        circle = np.column_stack([np.cos(phi), np.sin(phi)])
    else:
        rng = np.random.default_rng(0)
        raw = rng.standard_normal((n_dirs, m - 1))
        circle = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return delta * u[None, :] + sin_part * (circle @ basis)


def compactly_included(inner: Cone, outer: Cone, n_dirs: int = 10_000,
                       tol: float = GEOM_TOL) -> bool:
    """True iff inner's unit sphere slice lies in the interior of outer.

    For polyhedral inner cones checking the unit generators is exact (the
    interior of a convex cone is closed under conic combinations); for
    circular inner cones the boundary circle is sampled with ``n_dirs``
    directions, which is approximate for m >= 3.
    """
    if inner.dimension != outer.dimension:
        raise DimensionMismatchError("cones live in different dimensions")
    if inner.kind == "zero":
        raise ConeError("compact inclusion requires a nonzero inner cone")
    if outer.kind == "full":
        return True
    if inner.kind == "full":
        return False
    if inner.kind == "polyhedral":
        probes = inner.generators
    else:
        probes = _circular_boundary_directions(inner, n_dirs)
    return all(contains(outer, p, interior=True, tol=tol) for p in probes)


def support_function(points, mu) -> float:
    """H_S(mu) = max over the finite set of <point, mu>."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("support function of an empty set")
    mu = _as_vector(mu, m=pts.shape[1], name="mu")
    return float(np.max(pts @ mu))
