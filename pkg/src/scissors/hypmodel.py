"""Models of hyperbolic n-space: hyperboloid, Klein, Poincare ball, upper half-space.

Klein is the exact workhorse (geodesics are Euclidean segments, hyperplane
spans are linear algebra over the coordinate field); the other models are
reached by the standard isometries, in floating point except where the
required square roots exist in the field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .qfield import FieldElem, QuadElem, exact_sqrt, qf_embed, qf_sign

Number = Union[float, Fraction, QuadElem]


class Model(Enum):
    HYPERBOLOID = "hyperboloid"
    KLEIN = "klein"
    BALL = "ball"
    UPPER_HALF = "upper_half"


class GeometryError(ValueError):
    pass


def _to_float(x) -> float:
    if isinstance(x, QuadElem):
        return x.embed(1)
    return float(x)


def _is_exact(coords) -> bool:
    return all(isinstance(c, (Fraction, QuadElem, int)) for c in coords)


@dataclass(frozen=True)
class HPoint:
    """A point of H^n (or its boundary) in one of the four models.

    `infinity` marks the single point at infinity of the upper half-space
    model; it has no coordinates.
    """

    model: Model
    coords: Tuple[Number, ...]
    ideal: bool = False
    infinity: bool = False

    @classmethod
    def klein(cls, coords, ideal: bool = False) -> "HPoint":
        return cls(Model.KLEIN, tuple(coords), ideal)

    @property
    def dim(self) -> int:
        if self.infinity:
            raise GeometryError("the point at infinity carries no coordinates")
        n = len(self.coords)
        return n - 1 if self.model is Model.HYPERBOLOID else n

    def float_coords(self) -> Tuple[float, ...]:
        return tuple(_to_float(c) for c in self.coords)

    def is_exact(self) -> bool:
        return not self.infinity and _is_exact(self.coords)

    def to_json(self) -> dict:
        out = {"model": self.model.value, "ideal": self.ideal}
        if self.infinity:
            out["infinity"] = True
            out["coords"] = []
        else:
            out["coords"] = [_to_float(c) for c in self.coords]
        return out


def klein_point(coords, ideal: bool = False) -> HPoint:
    return HPoint.klein(coords, ideal)


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def _klein_to_hyperboloid(p: HPoint) -> HPoint:
    y = p.coords
    if p.ideal:
        return HPoint(Model.HYPERBOLOID, (1,) + tuple(y), True)
    if _is_exact(y):
        one = 1 - sum(c * c for c in y)
        s = exact_sqrt(one) if not isinstance(one, int) else exact_sqrt(Fraction(one))
        if s is not None and qf_sign(s) > 0:
            x0 = 1 / s
            return HPoint(Model.HYPERBOLOID, (x0,) + tuple(c * x0 for c in y), False)
    yf = [_to_float(c) for c in y]
    r2 = sum(c * c for c in yf)
    if r2 >= 1.0:
        raise GeometryError("Klein point outside the closed unit ball")
    x0 = 1.0 / math.sqrt(1.0 - r2)
    return HPoint(Model.HYPERBOLOID, (x0,) + tuple(c * x0 for c in yf), False)


def _hyperboloid_to_klein(p: HPoint) -> HPoint:
    x = p.coords
    x0 = x[0]
    if qf_sign(x0) <= 0 if _is_exact(x) else _to_float(x0) <= 0:
        raise GeometryError("hyperboloid point must have x0 > 0")
    return HPoint(Model.KLEIN, tuple(c / x0 for c in x[1:]), p.ideal)


def _klein_to_ball(p: HPoint) -> HPoint:
    if p.ideal:
        return HPoint(Model.BALL, p.coords, True)
    yf = [_to_float(c) for c in p.coords]
    s = math.sqrt(max(0.0, 1.0 - sum(c * c for c in yf)))
    return HPoint(Model.BALL, tuple(c / (1.0 + s) for c in yf), False)


def _ball_to_klein(p: HPoint) -> HPoint:
    if p.ideal:
        return HPoint(Model.KLEIN, p.coords, True)
    bf = [_to_float(c) for c in p.coords]
    r2 = sum(c * c for c in bf)
    return HPoint(Model.KLEIN, tuple(2.0 * c / (1.0 + r2) for c in bf), False)


def _ball_to_upper(p: HPoint) -> HPoint:
    """Inversion centred at the north pole (0,..,0,1), then t = -last coord.

    The point at infinity corresponds to the designated ideal point
    (0,...,0,1) of the ball/Klein models.
    """
    x = [_to_float(c) for c in p.coords]
    n = len(x)
    north = [0.0] * (n - 1) + [1.0]
    diff = [a - b for a, b in zip(x, north)]
    nrm2 = sum(c * c for c in diff)
    if nrm2 < 1e-30:
        return HPoint(Model.UPPER_HALF, (), True, infinity=True)
    img = [b + 2.0 * c / nrm2 for b, c in zip(north, diff)]
    coords = tuple(img[:-1]) + (-img[-1],)
    return HPoint(Model.UPPER_HALF, coords, p.ideal)


def _upper_to_ball(p: HPoint) -> HPoint:
    if p.infinity:
        n_guess = None
        raise GeometryError("dimension of the point at infinity is ambiguous; "
                            "use convert with an explicit reference point")
    x = [_to_float(c) for c in p.coords]
    x[-1] = -x[-1]
    n = len(x)
    north = [0.0] * (n - 1) + [1.0]
    diff = [a - b for a, b in zip(x, north)]
    nrm2 = sum(c * c for c in diff)
    img = [b + 2.0 * c / nrm2 for b, c in zip(north, diff)]
    return HPoint(Model.BALL, tuple(img), p.ideal)


def convert(p: HPoint, target: Model) -> HPoint:
    """Convert between models; ideal points map to ideal points.

    The upper-half point at infinity maps to the designated ideal point
    (0,...,0,1) in Klein/ball coordinates (its dimension is taken from the
    stored coordinate count when available).
    """
    if isinstance(target, str):
        target = Model(target)
    if p.infinity:
        if target is Model.UPPER_HALF:
            return p
        raise GeometryError("convert the point at infinity by substituting the "
                            "designated ideal point (0,...,0,1) at known dimension")
    if p.model is target:
        return p
    # route through Klein
    if p.model is Model.HYPERBOLOID:
        q = _hyperboloid_to_klein(p)
    elif p.model is Model.BALL:
        q = _ball_to_klein(p)
    elif p.model is Model.UPPER_HALF:
        q = _ball_to_klein(_upper_to_ball(p))
    else:
        q = p
    if target is Model.KLEIN:
        return q
    if target is Model.HYPERBOLOID:
        return _klein_to_hyperboloid(q)
    if target is Model.BALL:
        return _klein_to_ball(q)
    if target is Model.UPPER_HALF:
        return _ball_to_upper(_klein_to_ball(q))
    raise GeometryError(f"unknown target model {target}")


def infinity_point() -> HPoint:
    return HPoint(Model.UPPER_HALF, (), True, infinity=True)


def designated_ideal(n: int) -> HPoint:
    """The Klein ideal point (0,...,0,1) that the point at infinity maps to."""
    return HPoint(Model.KLEIN, (0.0,) * (n - 1) + (1.0,), True)


# ---------------------------------------------------------------------------
# metric quantities
# ---------------------------------------------------------------------------

def minkowski(u: Sequence[float], v: Sequence[float]) -> float:
    return -u[0] * v[0] + sum(a * b for a, b in zip(u[1:], v[1:]))


def dist(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance arccosh(-(x,y)) on the hyperboloid."""
    if p.ideal or q.ideal or p.infinity or q.infinity:
        raise GeometryError("infinite length: distance requires finite points")
    x = convert(p, Model.HYPERBOLOID).float_coords()
    y = convert(q, Model.HYPERBOLOID).float_coords()
    c = -minkowski(x, y)
    return math.acosh(max(1.0, c))


def chord_ideal_endpoints(a: Sequence[float], b: Sequence[float]):
    """Ideal endpoints of the Klein chord through a and b, ordered so the
    first lies on the a-side.  Returns (u, v) with u + t(v-u) hitting a first."""
    import numpy as np

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    A = float(d @ d)
    if A < 1e-30:
        raise GeometryError("coincident points have no chord")
    B = float(a @ d)
    C = float(a @ a) - 1.0
    disc = B * B - A * C
    if disc <= 0:
        raise GeometryError("chord misses the absolute")
    t1 = (-B - math.sqrt(disc)) / A
    t2 = (-B + math.sqrt(disc)) / A
    return a + t1 * d, a + t2 * d


def cross_ratio_dist(p: HPoint, q: HPoint) -> float:
    """Distance via the boundary cross-ratio along the Klein chord.

    With ideal endpoints u (on the p side) and v (on the q side):
    dist = 1/2 log( |uq| |pv| / (|up| |qv|) ).
    """
    if p.ideal or q.ideal:
        raise GeometryError("infinite length")
    import numpy as np

    a = np.asarray(convert(p, Model.KLEIN).float_coords())
    b = np.asarray(convert(q, Model.KLEIN).float_coords())
    u, v = chord_ideal_endpoints(a, b)
    n = np.linalg.norm
    return 0.5 * math.log((n(u - b) * n(a - v)) / (n(u - a) * n(b - v)))


# ---------------------------------------------------------------------------
# quadratic forms and hyperplanes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticForm:
    """Diagonal form  diag[0] x0^2 + diag[1] x1^2 + ... on homogeneous coords.

    The default for H^n is (-d, 1, ..., 1); exactly one entry is negative at
    the distinguished (place-1) embedding.
    """

    diag: Tuple[Number, ...]

    def __post_init__(self):
        negs = [c for c in self.diag if qf_sign(c) < 0] if _is_exact(self.diag) else \
            [c for c in self.diag if _to_float(c) < 0]
        if len(negs) != 1:
            raise GeometryError("quadratic form must have exactly one negative entry")

    @classmethod
    def standard(cls, n: int, d: Number = 1) -> "QuadraticForm":
        return cls((-1 * d,) + (1,) * n)

    @property
    def dim(self) -> int:
        return len(self.diag) - 1

    def bilinear(self, u: Sequence[Number], v: Sequence[Number]):
        terms = [c * a * b for c, a, b in zip(self.diag, u, v)]
        out = terms[0]
        for t in terms[1:]:
            out = out + t
        return out

    def apply(self, x: Sequence[Number]):
        return self.bilinear(x, x)

    def bilinear_float(self, u: Sequence[float], v: Sequence[float]) -> float:
        return sum(_to_float(c) * a * b for c, a, b in zip(self.diag, u, v))

    def to_json(self) -> dict:
        d0 = self.diag[0]
        d_val = -d0 if isinstance(d0, (int, Fraction)) else None
        out = {"dim": self.dim}
        if d_val is not None:
            out["d"] = float(d_val) if Fraction(d_val).denominator != 1 else int(d_val)
        else:
            out["d_quad"] = (-d0).to_list() if isinstance(d0, QuadElem) else None
            out["field_d"] = d0.d if isinstance(d0, QuadElem) else None
        return out


@dataclass(frozen=True)
class Hyperplane:
    """A hyperplane of H^n given as {x : B(normal, x) = 0} for a space-like
    normal vector under the ambient form."""

    normal: Tuple[Number, ...]
    form: QuadraticForm

    def __post_init__(self):
        if len(self.normal) != len(self.form.diag):
            raise GeometryError("normal length must match the form")
        nn = self.form.apply(self.normal)
        sgn = qf_sign(nn) if _is_exact(self.normal) and _is_exact(self.form.diag) \
            else (1 if self.form.bilinear_float(self.float_normal(), self.float_normal()) > 0 else -1)
        if sgn <= 0:
            raise GeometryError("hyperplane normal must be space-like")

    def float_normal(self) -> Tuple[float, ...]:
        return tuple(_to_float(c) for c in self.normal)


@dataclass(frozen=True)
class DihedralClass:
    """Classification of a hyperplane pair: an angle, parallel, or
    ultraparallel at some distance."""

    kind: str  # "angle" | "parallel" | "ultraparallel"
    angle: Optional[float] = None
    distance: Optional[float] = None
    cos_exact: Optional[Number] = None  # exact cosine when it exists in the field

    def is_angle(self, value: float, tol: float = 1e-12) -> bool:
        return self.kind == "angle" and self.angle is not None and abs(self.angle - value) <= tol


def dihedral_angle(h1: Hyperplane, h2: Hyperplane) -> DihedralClass:
    """Angle between hyperplanes under the reflection-group convention
    cos(theta) = -(e1,e2)/sqrt((e1,e1)(e2,e2)).

    |cos| < 1 gives an angle, |cos| = 1 parallel (including h against
    itself, by convention), |cos| > 1 ultraparallel at distance
    arccosh|cos|.  The comparison is exact whenever both normals are exact.
    """
    if h1.form != h2.form:
        raise GeometryError("hyperplanes live under different quadratic forms")
    exact = _is_exact(h1.normal) and _is_exact(h2.normal) and _is_exact(h1.form.diag)
    if exact:
        b12 = h1.form.bilinear(h1.normal, h2.normal)
        b11 = h1.form.apply(h1.normal)
        b22 = h2.form.apply(h2.normal)
        num = b12 * b12
        den = b11 * b22
        cmp = qf_sign(num - den)
        c_float = -qf_embed(b12) / math.sqrt(qf_embed(b11) * qf_embed(b22))
        ratio = num / den
        root = exact_sqrt(ratio)
        cos_exact = None
        if root is not None:
            cos_exact = -qf_sign(b12) * root if qf_sign(b12) != 0 else 0 * root
    else:
        u, v = h1.float_normal(), h2.float_normal()
        b12 = h1.form.bilinear_float(u, v)
        b11 = h1.form.bilinear_float(u, u)
        b22 = h2.form.bilinear_float(v, v)
        c_float = -b12 / math.sqrt(b11 * b22)
        cmp = 0 if abs(abs(c_float) - 1.0) < 1e-12 else (1 if abs(c_float) > 1 else -1)
        cos_exact = None
    if cmp == 0:
        return DihedralClass("parallel", cos_exact=cos_exact)
    if cmp < 0:
        return DihedralClass("angle", angle=math.acos(max(-1.0, min(1.0, c_float))),
                             cos_exact=cos_exact)
    return DihedralClass("ultraparallel", distance=math.acosh(abs(c_float)),
                         cos_exact=cos_exact)


def is_rational_point(coords: Sequence[Number]) -> bool:
    """Klein k-rational point test: 1 - sum(y_i^2) must be a nonzero square in k."""
    if not _is_exact(coords):
        raise GeometryError("is_rational_point requires exact coordinates")
    acc = None
    for c in coords:
        c = Fraction(c) if isinstance(c, int) else c
        sq = c * c
        acc = sq if acc is None else acc + sq
    if acc is None:
        raise GeometryError("empty coordinate vector")
    v = 1 - acc
    if isinstance(v, QuadElem):
        if v.is_zero():
            return False
        return exact_sqrt(v) is not None
    v = Fraction(v)
    if v == 0:
        return False
    return exact_sqrt(v) is not None
