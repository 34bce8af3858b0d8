"""Exact arithmetic in Q and in real quadratic fields Q(sqrt(d)).

Elements are a + b*sqrt(d) with rational a, b and a fixed squarefree d > 1.
Both real embeddings are available; signs are decided exactly (no floats),
which is what the rational-point predicates and the vertex solver need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rational = Fraction

_PLACES = (1, 2)


class FieldMismatchError(ValueError):
    """Arithmetic between elements of Q(sqrt(d)) and Q(sqrt(d')) with d != d'."""


def is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _is_square_int(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def rational_is_square(x: Fraction) -> bool:
    """Exact test for x in Q^2 (0 counts as a square)."""
    if x < 0:
        return False
    return _is_square_int(x.numerator) and _is_square_int(x.denominator)


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root in Q, or None."""
    if x < 0:
        return None
    pn, pd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(d) in the real quadratic field Q(sqrt(d)).

    The two real embeddings send it to a + b*sqrt(d) (place 1) and
    a - b*sqrt(d) (place 2).
    """

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d <= 1 or not is_squarefree(self.d):
            raise ValueError(f"d must be squarefree and > 1, got {self.d}")

    # -- construction helpers -------------------------------------------
    @classmethod
    def rational(cls, x, d: int) -> "QuadElem":
        return cls(Fraction(x), Fraction(0), d)

    @classmethod
    def sqrt_d(cls, d: int) -> "QuadElem":
        return cls(Fraction(0), Fraction(1), d)

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise FieldMismatchError(
                    f"mixed fields Q(sqrt({self.d})) and Q(sqrt({other.d}))"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    # -- ring/field structure -------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(d))")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadElem.rational(1, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def norm(self) -> Fraction:
        """Field norm a^2 - b^2 d (product of the two embeddings)."""
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    # -- embeddings and exact signs --------------------------------------
    def embed(self, place: int = 1) -> float:
        if place not in _PLACES:
            raise ValueError("place must be 1 or 2")
        s = math.sqrt(self.d)
        if place == 1:
            return float(self.a) + float(self.b) * s
        return float(self.a) - float(self.b) * s

    def conj(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def sign(self, place: int = 1) -> int:
        """Exact sign of the real embedding, computed without floats."""
        if place not in _PLACES:
            raise ValueError("place must be 1 or 2")
        a, b = (self.a, self.b) if place == 1 else (self.a, -self.b)
        if a == 0 and b == 0:
            return 0
        if b == 0:
            return 1 if a > 0 else -1
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d (equality impossible: b != 0)
        cmp = a * a - b * b * self.d
        s = 1 if cmp > 0 else -1
        return s if a > 0 else -s

    # place-1 ordering, so sorting over field elements is exact
    def __lt__(self, other):
        o = self._coerce(other)
        return (self - o).sign(1) < 0

    def __le__(self, other):
        o = self._coerce(other)
        return (self - o).sign(1) <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        return (self - o).sign(1) > 0

    def __ge__(self, other):
        o = self._coerce(other)
        return (self - o).sign(1) >= 0

    def __abs__(self):
        return self if self.sign(1) >= 0 else -self

    def __float__(self):
        return self.embed(1)

    def __repr__(self):
        return f"QuadElem({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else ''}{self.b}*sqrt({self.d})"

    # -- serialization ----------------------------------------------------
    def to_list(self) -> list:
        """[a_num, a_den, b_num, b_den]; d is carried by the enclosing document."""
        return [self.a.numerator, self.a.denominator, self.b.numerator, self.b.denominator]

    @classmethod
    def from_list(cls, data, d: int) -> "QuadElem":
        an, ad, bn, bd = data
        return cls(Fraction(an, ad), Fraction(bn, bd), d)


FieldElem = Union[Fraction, QuadElem]


def qf_embed(x: FieldElem, place: int = 1) -> float:
    if isinstance(x, QuadElem):
        return x.embed(place)
    return float(x)


def qf_conj(x: FieldElem) -> FieldElem:
    if isinstance(x, QuadElem):
        return x.conj()
    return x


def qf_sign(x: FieldElem, place: int = 1) -> int:
    if isinstance(x, QuadElem):
        return x.sign(place)
    x = Fraction(x)
    return 0 if x == 0 else (1 if x > 0 else -1)


def quad_is_square(x: QuadElem) -> bool:
    return quad_sqrt(x) is not None


def quad_sqrt(x: QuadElem) -> Optional[QuadElem]:
    """Exact square root of x in Q(sqrt(d)), or None if x is not a square.

    z = p + q*sqrt(d) solves z^2 = a + b*sqrt(d) iff p^2 + q^2 d = a and
    2pq = b, which reduces to rational squareness tests.
    """
    d = x.d
    a, b = x.a, x.b
    if x.sign(1) < 0 or x.sign(2) < 0:
        return None  # a square is totally non-negative
    if b == 0:
        p = rational_sqrt(a)
        if p is not None:
            return QuadElem(p, Fraction(0), d)
        q = rational_sqrt(a / d)
        if q is not None:
            return QuadElem(Fraction(0), q, d)
        return None
    disc = a * a - b * b * d  # norm of x; must be a rational square
    s = rational_sqrt(disc)
    if s is None:
        return None
    for root in ((a + s) / 2, (a - s) / 2):
        p = rational_sqrt(root)
        if p is not None and p != 0:
            q = b / (2 * p)
            cand = QuadElem(p, q, d)
            if cand * cand == x:
                return cand
    return None


def exact_sqrt(x: FieldElem) -> Optional[FieldElem]:
    """Square root of a Fraction or QuadElem within its own field, or None."""
    if isinstance(x, QuadElem):
        return quad_sqrt(x)
    return rational_sqrt(Fraction(x))


def recognize_rational(x: float, max_den: int, tol: float) -> Optional[Fraction]:
    """Recognize x as p/q with q <= max_den and |x - p/q| <= tol.

    Walks the continued-fraction convergents of x (exactly, via Fraction)
    and returns the qualifying convergent with the smallest denominator,
    or None if no convergent qualifies.
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if math.isnan(x) or math.isinf(x):
        return None
    target = Fraction(x)
    # convergent recursion p_k = a_k p_{k-1} + p_{k-2}, seeded at k = -2, -1
    p_prev, q_prev = 0, 1
    p_cur, q_cur = 1, 0
    rem = target
    for _ in range(512):
        a = rem.numerator // rem.denominator
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_cur > max_den:
            return None
        if abs(target - Fraction(p_cur, q_cur)) <= tol:
            return Fraction(p_cur, q_cur)
        frac = rem - a
        if frac == 0:
            return None
        rem = 1 / frac
    return None
