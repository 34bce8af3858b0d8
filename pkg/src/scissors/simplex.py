"""Geodesic simplices in Klein coordinates, product simplices, and the
twisted symmetric-group action on them.

A simplex carries its vertices in a fixed order plus an orientation
coefficient.  The geometric orientation of the ordering is the sign of the
determinant of the homogeneous vertex matrix; the signed volume used
throughout is  orientation * det_sign * |volume|,  so in-place vertex
substitutions (subdivision, ideal cone points) do their own sign
bookkeeping.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .hypmodel import GeometryError, HPoint, Model
from .qfield import FieldElem, QuadElem, qf_conj

_DEGENERATE_TOL = 1e-12


def _exact_det(rows) -> Optional[object]:
    """Determinant by fraction-free-ish Gaussian elimination over a field.

    Returns None if any entry is a float (caller falls back to numpy).
    """
    n = len(rows)
    m = [list(r) for r in rows]
    for r in m:
        for c in r:
            if isinstance(c, float):
                return None
    det = Fraction(1)
    sign = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            v = m[r][col]
            nonzero = (not v.is_zero()) if isinstance(v, QuadElem) else (v != 0)
            if nonzero:
                piv = r
                break
        if piv is None:
            return _zero_like(m[0][0])
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pivval = m[col][col]
        det = det * pivval
        for r in range(col + 1, n):
            factor = m[r][col] / pivval
            m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return sign * det


def _zero_like(x):
    if isinstance(x, QuadElem):
        return QuadElem.rational(0, x.d)
    return Fraction(0)


@dataclass(frozen=True)
class Simplex:
    """Ordered geodesic simplex in the Klein model.

    At most one vertex may be ideal, except for the all-ideal tetrahedron in
    H^3 (used for the cross-ratio volume).  Degenerate (affinely dependent)
    simplices are permitted and flagged, not rejected.
    """

    vertices: Tuple[HPoint, ...]
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        for v in self.vertices:
            if v.infinity:
                raise GeometryError("use Klein coordinates; the upper-half "
                                    "infinity has no Klein chart")
            if v.model is not Model.KLEIN:
                raise GeometryError("simplex vertices must be Klein-model points")
        n_ideal = sum(1 for v in self.vertices if v.ideal)
        m = self.dim
        if n_ideal > 1 and m not in (2, 3):
            raise GeometryError(
                "at most one ideal vertex in dimension > 3")
        if m == 3 and n_ideal in (2, 3):
            raise GeometryError(
                "H^3 simplices take at most one ideal vertex, or all four")

    @classmethod
    def from_coords(cls, coords: Sequence[Sequence], orientation: int = 1,
                    ideal: Optional[Sequence[bool]] = None) -> "Simplex":
        pts = []
        for i, c in enumerate(coords):
            pts.append(HPoint.klein(tuple(c), ideal=bool(ideal[i]) if ideal else False))
        return cls(tuple(pts), orientation)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ideal_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.vertices) if v.ideal)

    def float_matrix(self) -> np.ndarray:
        return np.array([v.float_coords() for v in self.vertices], dtype=float)

    def homogeneous_det(self) -> float:
        M = np.hstack([np.ones((len(self.vertices), 1)), self.float_matrix()])
        return float(np.linalg.det(M))

    def exact_homogeneous_det(self):
        rows = []
        for v in self.vertices:
            if not v.is_exact():
                return None
            rows.append((1,) + tuple(v.coords))
        drows = []
        for r in rows:
            drows.append([Fraction(c) if isinstance(c, int) else c for c in r])
        return _exact_det(drows)

    def det_sign(self) -> int:
        d = self.exact_homogeneous_det()
        if d is not None:
            from .qfield import qf_sign
            return qf_sign(d)
        df = self.homogeneous_det()
        scale = max(1.0, np.abs(self.float_matrix()).max()) ** self.dim
        if abs(df) <= _DEGENERATE_TOL * scale:
            return 0
        return 1 if df > 0 else -1

    def is_degenerate(self) -> bool:
        return self.det_sign() == 0

    def reversed(self) -> "Simplex":
        return replace(self, orientation=-self.orientation)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [v.to_json() for v in self.vertices],
            "orientation": self.orientation,
        }


@dataclass(frozen=True)
class ProductSimplex:
    """Product of geodesic simplices, one per hyperbolic factor."""

    factors: Tuple[Simplex, ...]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}


def subdivide(s: Simplex, y: HPoint) -> List[Simplex]:
    """Star subdivision at a finite point: piece i replaces vertex i by y.

    Signed volumes of the pieces (with in-place orderings) sum to the signed
    volume of s; pieces may be degenerate.
    """
    if y.ideal or y.infinity:
        raise GeometryError("subdivision point must be finite")
    if y.model is not Model.KLEIN:
        raise GeometryError("subdivision point must be a Klein-model point")
    out = []
    for i in range(len(s.vertices)):
        verts = list(s.vertices)
        verts[i] = y
        out.append(Simplex(tuple(verts), s.orientation))
    return out


def faces(s: Simplex, k: int) -> List[Simplex]:
    """All k-dimensional faces, ordered lexicographically by vertex subset.

    The induced orientation coefficient is (-1)^(sum of omitted indices),
    which reduces to the alternating boundary signs in codimension one and
    to the identity for k = dim.
    """
    m = s.dim
    if not 0 <= k <= m:
        raise ValueError("face dimension out of range")
    total = m * (m + 1) // 2  # sum of all indices 0..m
    out = []
    for subset in itertools.combinations(range(m + 1), k + 1):
        omitted = total - sum(subset)
        sign = -1 if omitted % 2 else 1
        verts = tuple(s.vertices[i] for i in subset)
        out.append(Simplex(verts, s.orientation * sign))
    return out


def twist(perm: Sequence[int], p: ProductSimplex) -> ProductSimplex:
    """Twisted symmetric-group action on a product simplex.

    Factor i of the result is sigma_i sigma_{perm(i)}^{-1} applied to factor
    perm(i); for two factors over conjugate embeddings of a real quadratic
    field the mismatch is Galois conjugation of every coordinate.
    """
    n = len(p.factors)
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..N-1")
    if list(perm) == list(range(n)):
        return p
    if n != 2:
        raise GeometryError("nontrivial twists are supported for N = 2 factors only")
    new_factors = []
    for i in range(n):
        src = p.factors[perm[i]]
        if i == perm[i]:
            new_factors.append(src)
            continue
        verts = []
        for v in src.vertices:
            if not v.is_exact() or not any(isinstance(c, QuadElem) for c in v.coords):
                raise GeometryError("twist requires exact coordinates over a "
                                    "real quadratic field")
            verts.append(HPoint.klein(tuple(qf_conj(c) for c in v.coords), v.ideal))
        new_factors.append(Simplex(tuple(verts), src.orientation))
    return ProductSimplex(tuple(new_factors))


# ---------------------------------------------------------------------------
# ideal tetrahedra in H^3: boundary uniformization and cross-ratio
# ---------------------------------------------------------------------------

_INF = complex(float("inf"), 0.0)


def boundary_to_c(y: Sequence[float]) -> complex:
    """Klein ideal point of H^3 to the boundary Riemann sphere C u {inf}.

    Stereographic projection z = (y1 + i y2)/(1 - y3) from the designated
    ideal point (0,0,1), matching the upper-half-space boundary chart.
    """
    y1, y2, y3 = y
    den = 1.0 - y3
    if abs(den) < 1e-14:
        return _INF
    return complex(y1, y2) / den


def _cross_ratio(z0: complex, z1: complex, z2: complex, z3: complex) -> complex:
    """Image of z3 under the Moebius map sending (z0, z1, z2) to (0, 1, inf)."""
    def diff(a, b):
        return a - b

    # handle points at infinity by the usual limit rules
    pts = [z0, z1, z2, z3]
    inf_idx = [i for i, z in enumerate(pts) if z == _INF or not math.isfinite(abs(z))]
    if len(inf_idx) > 1:
        raise GeometryError("coincident boundary points")
    if not inf_idx:
        return (z3 - z0) * (z1 - z2) / ((z3 - z2) * (z1 - z0))
    i = inf_idx[0]
    if i == 0:
        return (z1 - z2) / (z3 - z2)
    if i == 1:
        return (z3 - z0) / (z3 - z2)
    if i == 2:
        return (z3 - z0) / (z1 - z0)
    return (z1 - z2) / (z1 - z0)


def cross_ratio_ordered(s: Simplex) -> complex:
    """Raw cross-ratio of the ordered ideal vertex 4-tuple of an all-ideal
    H^3 simplex (sign conventions follow the ordering)."""
    if s.dim != 3 or len(s.ideal_indices) != 4:
        raise GeometryError("cross-ratio requires an all-ideal H^3 simplex")
    zs = [boundary_to_c(v.float_coords()) for v in s.vertices]
    for a, b in itertools.combinations(zs, 2):
        if a == _INF and b == _INF:
            raise GeometryError("coincident ideal vertices")
        if a != _INF and b != _INF and abs(a - b) <= 1e-13 * max(1.0, abs(a), abs(b)):
            raise GeometryError("coincident ideal vertices")
    z = _cross_ratio(*zs)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError("degenerate boundary configuration")
    return z


def cross_ratio_parameter(s: Simplex) -> complex:
    """Canonical cross-ratio parameter of an all-ideal H^3 simplex.

    The six-fold orbit {z, 1/(1-z), 1-1/z, 1/z, 1-z, z/(z-1)} is collapsed to
    the representative with Im > 0 having the largest imaginary part (ties
    broken by the smaller real part).
    """
    z = cross_ratio_ordered(s)
    orbit = _cross_ratio_orbit(z)
    upper = [w for w in orbit if w.imag > 1e-15]
    if not upper:
        raise GeometryError("degenerate (real cross-ratio) tetrahedron")
    return min(upper, key=lambda w: (-w.imag, w.real))


def _cross_ratio_orbit(z: complex) -> List[complex]:
    out = [z]
    try:
        out += [1.0 / (1.0 - z), 1.0 - 1.0 / z, 1.0 / z, 1.0 - z, z / (z - 1.0)]
    except ZeroDivisionError:
        raise GeometryError("degenerate cross-ratio")
    return out
