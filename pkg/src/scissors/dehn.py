"""Scissors-congruence sums, the H^3 Dehn invariant, its reduction in
R (x) (R / pi Q), and the generalized Dehn invariant on product simplices.

Angles are identified modulo rational multiples of pi by continued-fraction
recognition of (theta - theta')/pi; the denominator bound keeps false
identifications under control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .hypmodel import GeometryError
from .qfield import recognize_rational
from .simplex import ProductSimplex, Simplex

DEFAULT_TOL = 1e-9
DEFAULT_MAX_DEN = 10 ** 4


@dataclass
class DehnSum:
    """Formal sum of (length, angle) pairs in P(H^1) (x) P(S^1).

    Raw sums may carry negative lengths (differences of invariants); the
    reduced normal form has positive lengths and angles in (0, pi).
    """

    terms: List[Tuple[float, float]] = field(default_factory=list)

    def __add__(self, other: "DehnSum") -> "DehnSum":
        return DehnSum(self.terms + other.terms)

    def __sub__(self, other: "DehnSum") -> "DehnSum":
        return DehnSum(self.terms + [(-l, t) for l, t in other.terms])

    def __neg__(self) -> "DehnSum":
        return DehnSum([(-l, t) for l, t in self.terms])

    def scaled(self, c: float) -> "DehnSum":
        return DehnSum([(c * l, t) for l, t in self.terms])

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> list:
        return [[l, t] for l, t in self.terms]

    @classmethod
    def from_json(cls, data) -> "DehnSum":
        return cls([(float(l), float(t)) for l, t in data])


@dataclass(frozen=True)
class ScissorsSum:
    """Formal Q-linear combination of simplices or product simplices."""

    terms: Tuple[Tuple[Fraction, Union[Simplex, ProductSimplex]], ...]

    def __post_init__(self):
        sigs = {(_ambient_signature(s)) for _, s in self.terms}
        if len(sigs) > 1:
            raise GeometryError("all terms must share the ambient dimension signature")


def _ambient_signature(s: Union[Simplex, ProductSimplex]) -> Tuple[int, ...]:
    if isinstance(s, ProductSimplex):
        return s.dims
    return (s.dim,)


# ---------------------------------------------------------------------------
# the H^3 Dehn invariant
# ---------------------------------------------------------------------------


def _hyperboloid_lift(y: np.ndarray) -> np.ndarray:
    r2 = float(y @ y)
    x0 = 1.0 / math.sqrt(1.0 - r2)
    return np.concatenate([[x0], x0 * y])


def _mink(u: np.ndarray, v: np.ndarray) -> float:
    return float(-u[0] * v[0] + u[1:] @ v[1:])


def _face_normal(verts: np.ndarray, face: Tuple[int, int, int], opp: int) -> np.ndarray:
    """Homogeneous outward normal of the Klein plane through three vertices,
    oriented away from the opposite vertex."""
    a, b, c = (verts[i] for i in face)
    n = np.cross(b - a, c - a)
    e = np.concatenate([[float(n @ a)], n])
    inside = np.concatenate([[1.0], verts[opp]])
    if _mink(e, inside) > 0:
        e = -e
    return e


def edge_data_h3(s: Simplex) -> List[Tuple[Tuple[int, int], float, float]]:
    """For each edge (i < j) of a finite H^3 simplex: hyperbolic length and
    interior dihedral angle (outward-normal convention)."""
    if s.dim != 3:
        raise GeometryError("H^3 simplex expected")
    verts = s.float_matrix()
    lifts = [_hyperboloid_lift(v) for v in verts]
    out = []
    all_idx = {0, 1, 2, 3}
    for i in range(4):
        for j in range(i + 1, 4):
            k, l = sorted(all_idx - {i, j})
            length = math.acosh(max(1.0, -_mink(lifts[i], lifts[j])))
            e1 = _face_normal(verts, (i, j, k), l)
            e2 = _face_normal(verts, (i, j, l), k)
            c = -_mink(e1, e2) / math.sqrt(_mink(e1, e1) * _mink(e2, e2))
            angle = math.acos(max(-1.0, min(1.0, c)))
            out.append(((i, j), length, angle))
    return out


def dehn3(s: Simplex) -> DehnSum:
    """Dehn invariant of a finite H^3 simplex: the six (edge length,
    dihedral angle) pairs, weighted by the simplex's signed orientation.
    Degenerate simplices give the empty sum."""
    if s.dim != 3:
        raise GeometryError("H^3 simplex expected")
    if any(v.ideal for v in s.vertices):
        raise GeometryError("dehn3 requires a finite simplex (ideal edges "
                            "need the regularized extended invariant)")
    sign = s.det_sign()
    if sign == 0:
        return DehnSum([])
    w = float(s.orientation * sign)
    return DehnSum([(w * length, angle) for _, length, angle in edge_data_h3(s)])


# ---------------------------------------------------------------------------
# reduction modulo pi Q
# ---------------------------------------------------------------------------


def _normalize_term(length: float, angle: float) -> Tuple[float, float]:
    if length < 0:
        length, angle = -length, -angle
    angle = angle - math.pi * math.floor(angle / math.pi)
    return length, angle


def _merge_equal_lengths(terms: List[Tuple[float, float]], tol: float):
    """Bilinearity on the length leg: L(x)a + L(x)b = L(x)(a+b) for equal
    lengths (this is what cancels internal edges, whose angles sum to a
    multiple of pi)."""
    terms = sorted(terms)
    out: List[Tuple[float, float]] = []
    i = 0
    while i < len(terms):
        j = i
        length_sum, angle_sum, count = 0.0, 0.0, 0
        while j < len(terms) and terms[j][0] - terms[i][0] <= tol:
            length_sum += terms[j][0]
            angle_sum += terms[j][1]
            count += 1
            j += 1
        out.append(_normalize_term(length_sum / count, angle_sum))
        i = j
    return out


def _merge_angle_classes(terms: List[Tuple[float, float]], tol: float,
                         max_den: int):
    """Group terms whose angles differ by a recognized rational multiple of
    pi, sum lengths, drop pi-rational angles and cancelled groups, and flip
    negative totals via (-L)(x)theta = L(x)(pi - theta)."""
    pending = list(terms)
    groups: List[List[float]] = []  # [angle_rep, total_length]
    while pending:
        length, angle = pending.pop(0)
        for g in groups:
            if recognize_rational((angle - g[0]) / math.pi, max_den, tol) is not None:
                g[1] += length
                break
        else:
            groups.append([angle, length])
        if not pending:
            kept: List[List[float]] = []
            for rep, total in groups:
                if abs(total) <= tol:
                    continue
                if recognize_rational(rep / math.pi, max_den, tol) is not None:
                    continue
                if total < 0:
                    pending.append(_normalize_term(-total, math.pi - rep))
                else:
                    kept.append([rep, total])
            groups = kept
    return [(total, rep) for rep, total in groups]


def reduce(dsum: DehnSum, tol: float = DEFAULT_TOL,
           max_den: int = DEFAULT_MAX_DEN) -> DehnSum:
    """Canonical form in R (x) (R / pi Q), alternating the two bilinear
    merges to a fixpoint:

    * equal lengths add their angles (internal-edge mechanism: angles around
      an interior edge sum to 2 pi and die in R / pi Q);
    * angles that differ by a recognized rational multiple of pi merge their
      lengths; groups with pi-rational angle or vanishing total length are
      dropped, negative totals flip via (-L)(x)theta = L(x)(pi - theta).

    Idempotent for fixed (tol, max_den); output is sorted by angle.
    """
    terms = [_normalize_term(l, t) for l, t in dsum.terms]
    for _ in range(len(terms) + 2):
        merged = _merge_equal_lengths(terms, tol)
        merged = _merge_angle_classes(merged, tol, max_den)
        merged = [_normalize_term(l, t) for l, t in merged]
        if len(merged) == len(terms) and all(
                abs(a[0] - b[0]) <= 1e-15 and abs(a[1] - b[1]) <= 1e-15
                for a, b in zip(sorted(merged), sorted(terms))):
            break
        terms = merged
    return DehnSum(sorted(terms, key=lambda t: (t[1], t[0])))


def is_zero_dehn(dsum: DehnSum, tol: float = DEFAULT_TOL,
                 max_den: int = DEFAULT_MAX_DEN) -> bool:
    """True iff the reduced sum is empty."""
    return len(reduce(dsum, tol, max_den)) == 0


# ---------------------------------------------------------------------------
# the generalized Dehn invariant on products
# ---------------------------------------------------------------------------


@dataclass
class GeneralizedDehn:
    """Sum of (companion simplices) (x) DehnSum terms, the companion factors
    kept symbolically."""

    terms: List[Tuple[Tuple[Simplex, ...], DehnSum]]

    def is_zero(self, tol: float = DEFAULT_TOL, max_den: int = DEFAULT_MAX_DEN) -> bool:
        return all(is_zero_dehn(d, tol, max_den) for _, d in self.terms)


def generalized_dehn(p: ScissorsSum, factor: int,
                     tol: float = DEFAULT_TOL,
                     max_den: int = DEFAULT_MAX_DEN) -> GeneralizedDehn:
    """Apply the H^3 Dehn invariant in the given factor of each product
    simplex, tensored with the untouched companions; terms with identical
    companions are combined and reduced.  Only 3-dimensional factors are
    supported (other odd dimensions would need spherical scissors classes).
    """
    grouped: dict = {}
    order: List[Tuple[Simplex, ...]] = []
    for coeff, term in p.terms:
        if isinstance(term, ProductSimplex):
            factors = term.factors
        else:
            factors = (term,)
        if not 0 <= factor < len(factors):
            raise GeometryError("factor index out of range")
        if factors[factor].dim != 3:
            raise GeometryError("generalized Dehn invariant implemented for "
                                "3-dimensional factors only")
        companions = tuple(f for i, f in enumerate(factors) if i != factor)
        d = dehn3(factors[factor]).scaled(float(coeff))
        if companions not in grouped:
            grouped[companions] = DehnSum([])
            order.append(companions)
        grouped[companions] = grouped[companions] + d
    out = []
    for comp in order:
        reduced = reduce(grouped[comp], tol, max_den)
        if len(reduced):
            out.append((comp, reduced))
    return GeneralizedDehn(out)
