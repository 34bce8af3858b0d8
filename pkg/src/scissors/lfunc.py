"""Special values of zeta and L-functions, point counts over finite fields,
and arithmetic covolume classes.

Exact values of zeta_k(1-n) for real quadratic k come from generalized
Bernoulli numbers; numeric cross-checks come from the completed functional
equation and from Euler products driven by polynomial factorization mod p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

# ---------------------------------------------------------------------------
# Bernoulli numbers and generalized Bernoulli numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n with the B_1 = -1/2 convention."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    acc = Fraction(0)
    for j in range(n):
        acc += math.comb(n + 1, j) * bernoulli_number(j)
    return -acc / (n + 1)


def bernoulli_polynomial(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k), exactly."""
    x = Fraction(x)
    return sum(math.comb(n, k) * bernoulli_number(k) * x ** (n - k)
               for k in range(n + 1))


# ---------------------------------------------------------------------------
# quadratic Dirichlet characters
# ---------------------------------------------------------------------------


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), multiplicative extension of Jacobi."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol (a|n) for odd n > 0
    result = sign
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D == 1:
        return True
    if D % 4 == 1:
        return _squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(n: int) -> bool:
    if n <= 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class DirichletChar:
    """A quadratic Dirichlet character as an f-periodic value table."""

    modulus: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1 or len(self.values) != self.modulus:
            raise ValueError("value table must have length equal to the modulus")

    @classmethod
    def trivial(cls) -> "DirichletChar":
        return cls(1, (1,))

    @classmethod
    def quadratic(cls, D: int) -> "DirichletChar":
        """The character chi_D = (D|.) of a fundamental discriminant D."""
        if not is_fundamental_discriminant(D):
            raise ValueError(f"{D} is not a fundamental discriminant")
        if D == 1:
            return cls.trivial()
        f = abs(D)
        return cls(f, tuple(kronecker_symbol(D, a) for a in range(f)))

    def __call__(self, a: int) -> int:
        return self.values[a % self.modulus]

    def is_even(self) -> bool:
        return self(self.modulus - 1) == 1  # chi(-1)


def gen_bernoulli(n: int, chi: DirichletChar) -> Fraction:
    """Generalized Bernoulli number B_{n,chi} = f^(n-1) sum_a chi(a) B_n(a/f).

    L(chi, 1-n) = -B_{n,chi}/n exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    f = chi.modulus
    acc = Fraction(0)
    for a in range(1, f + 1):
        c = chi(a)
        if c:
            acc += c * bernoulli_polynomial(n, Fraction(a, f))
    return Fraction(f) ** (n - 1) * acc


def l_special(chi: DirichletChar, one_minus_n: int) -> Fraction:
    """Exact L(chi, 1-n) for n >= 1 given as the argument 1-n <= 0."""
    n = 1 - one_minus_n
    if n < 1:
        raise ValueError("argument must be <= 0")
    return -gen_bernoulli(n, chi) / n


class ZetaSpecial(NamedTuple):
    value: Fraction
    trivial_zero: bool


def zeta_quad_special(d: int, n: int) -> ZetaSpecial:
    """Exact zeta_k(1-n) for the real quadratic field of fundamental
    discriminant d, via zeta_k = zeta * L(chi_d).

    Odd n gives the trivial zero (flagged).  d = 1 is allowed and means Q.
    """
    if d != 1 and (d <= 0 or not is_fundamental_discriminant(d)):
        raise ValueError("d must be a positive fundamental discriminant (or 1 for Q)")
    if n < 2:
        raise ValueError("n must be >= 2")
    if n % 2 == 1:
        return ZetaSpecial(Fraction(0), True)
    zeta_part = l_special(DirichletChar.trivial(), 1 - n)
    if d == 1:
        return ZetaSpecial(zeta_part, False)
    chi = DirichletChar.quadratic(d)
    return ZetaSpecial(zeta_part * l_special(chi, 1 - n), False)


# ---------------------------------------------------------------------------
# numeric route: series + completed functional equation
# ---------------------------------------------------------------------------


def _gamma(x: float) -> float:
    """Gamma with the reflection formula at negative non-integers."""
    if x > 0:
        return math.gamma(x)
    if x == int(x):
        raise ValueError("Gamma pole")
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def zeta_series(s: float, terms: int) -> float:
    """zeta(s) by direct summation with an Euler-Maclaurin tail."""
    n = max(10, terms)
    acc = sum(k ** (-s) for k in range(1, n + 1))
    # tail: integral + 1/2 f(N) + B2/2 f'(N) + B4/24 f'''(N)
    acc += n ** (1 - s) / (s - 1) - 0.5 * n ** (-s)
    acc += s * n ** (-s - 1) / 12.0
    acc -= s * (s + 1) * (s + 2) * n ** (-s - 3) / 720.0
    return acc


def l_series(chi: DirichletChar, s: float, terms: int) -> float:
    """L(chi, s) by direct summation (character sums are bounded, so the
    truncation error is O(f * N^-s))."""
    acc = 0.0
    for k in range(1, terms + 1):
        c = chi(k)
        if c:
            acc += c * k ** (-s)
    return acc


def zeta_numeric_fe(d: Optional[int], n: int, terms: int = 10 ** 6) -> float:
    """Numeric zeta_k(1-n) from zeta_k(n) and the completed functional
    equation Lambda(s) = Lambda(1-s), Lambda(s) = d^(s/2) (pi^(-s/2)
    Gamma(s/2))^r zeta_k(s), with r the number of real places.

    d None or 1 selects k = Q (r = 1); otherwise d is the positive
    fundamental discriminant of the real quadratic field (r = 2).
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("n must be an even integer >= 2")
    if d in (None, 1):
        disc, r = 1.0, 1
        zeta_n = zeta_series(float(n), terms)
    else:
        if not is_fundamental_discriminant(d) or d < 0:
            raise ValueError("d must be a positive fundamental discriminant")
        disc, r = float(d), 2
        chi = DirichletChar.quadratic(d)
        zeta_n = zeta_series(float(n), terms) * l_series(chi, float(n), terms)
    gamma_ratio = (_gamma(n / 2.0) / _gamma((1.0 - n) / 2.0)) ** r
    return disc ** ((2 * n - 1) / 2.0) * math.pi ** ((1 - 2 * n) * r / 2.0) \
        * gamma_ratio * zeta_n


# ---------------------------------------------------------------------------
# Euler products from factorization degrees mod p
# ---------------------------------------------------------------------------


def _primes_upto(n: int) -> List[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [i for i, v in enumerate(sieve) if v]


def _mobius(n: int) -> int:
    out = 1
    k = 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            out = -out
        k += 1
    if n > 1:
        out = -out
    return out


def prime_zeta(s: float) -> float:
    """P(s) = sum_p p^-s via sum_k mu(k)/k log zeta(ks)."""
    acc = 0.0
    for k in range(1, 64):
        m = _mobius(k)
        if m:
            acc += m / k * math.log(zeta_series(k * s, 20000))
    return acc


def _parse_minpoly(poly) -> List[int]:
    """Accept 'x^4-x^2-1'-style strings or coefficient lists (ascending)."""
    if isinstance(poly, (list, tuple)):
        return [int(c) for c in poly]
    import sympy

    x = sympy.symbols("x")
    expr = sympy.sympify(str(poly).replace("^", "**"))
    p = sympy.Poly(expr, x)
    if not all(c.is_integer for c in p.all_coeffs()):
        raise ValueError("minpoly must have integer coefficients")
    return [int(c) for c in p.all_coeffs()[::-1]]


class EulerProduct(NamedTuple):
    value: float
    err_estimate: float
    flagged_primes: Tuple[int, ...]


def dedekind_euler(minpoly, s: float, p_max: int) -> EulerProduct:
    """Truncated Euler product for the Dedekind zeta of Q[x]/(minpoly):

        prod_{p <= p_max} prod_{g | minpoly mod p} (1 - p^(-s deg g))^(-1),

    with factor degrees read off the distinct irreducible factors.  For
    quadratic minpoly the splitting is taken exactly from the fundamental
    discriminant character; otherwise primes dividing the polynomial
    discriminant use the squarefree factorization degrees and are flagged
    (the maximal order may differ there).
    """
    coeffs = _parse_minpoly(minpoly)
    if len(coeffs) < 2:
        raise ValueError("minpoly must be non-constant")
    if s <= 1.5:
        raise ValueError("s must lie in the absolutely convergent range (> 1.5)")
    if p_max < 100:
        raise ValueError("p_max must be >= 100")

    import sympy

    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    if not poly.is_irreducible:
        raise ValueError("minpoly must be irreducible over Q")
    deg = poly.degree()

    primes = _primes_upto(p_max)
    log_acc = 0.0
    flagged: List[int] = []

    if deg == 1:
        for p in primes:
            log_acc -= math.log(1.0 - p ** (-s))
    elif deg == 2:
        # exact splitting from the fundamental discriminant
        D0 = int(sympy.discriminant(poly))
        D = _fundamental_part(D0)
        chi = DirichletChar.quadratic(D) if D != 1 else DirichletChar.trivial()
        for p in primes:
            c = chi(p) if D != 1 else 1
            if c == 1:
                log_acc -= 2.0 * math.log(1.0 - p ** (-s))
            elif c == -1:
                log_acc -= math.log(1.0 - p ** (-2.0 * s))
            else:
                log_acc -= math.log(1.0 - p ** (-s))
    else:
        disc = int(sympy.discriminant(poly))
        for p in primes:
            if disc % p == 0:
                flagged.append(p)
            for d_i in _factor_degrees_mod_p(coeffs, p):
                log_acc -= math.log(1.0 - float(p) ** (-s * d_i))

    # Chebotarev-average tail: each large p carries one degree-1 factor on
    # average, so the mean of the omitted log-tail is sum_{p > pmax} p^-s.
    mean_tail = prime_zeta(s) - sum(p ** (-s) for p in primes)
    log_acc += mean_tail
    # residual: fluctuation around the mean (square-root cancellation
    # heuristic), second-order prime powers, and flagged ramified primes
    fluct = deg * p_max ** (0.5 - s)
    second = p_max ** (1.0 - 2.0 * s)
    flag_err = sum(deg * p ** (-s) for p in flagged)
    value = math.exp(log_acc)
    err = value * (fluct + second + flag_err)
    return EulerProduct(value, err, tuple(flagged))


def _fundamental_part(D0: int) -> int:
    """Fundamental discriminant of Q(sqrt(D0))."""
    if D0 == 0:
        raise ValueError("degenerate discriminant")
    sign = 1 if D0 > 0 else -1
    m = abs(D0)
    f = 1
    k = 2
    while k * k <= m:
        while m % (k * k) == 0:
            m //= k * k
            f *= k
        k += 1
    core = sign * m
    if core % 4 == 1:
        return core
    return 4 * core


def _factor_degrees_mod_p(coeffs: Sequence[int], p: int) -> List[int]:
    """Degrees of the distinct irreducible factors of the polynomial mod p
    (multiplicities dropped), via sympy."""
    import sympy

    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    if poly.degree() <= 0:
        return []
    _, factors = poly.factor_list()
    return [f.degree() for f, _mult in factors if f.degree() > 0]


# ---------------------------------------------------------------------------
# point counts over finite fields
# ---------------------------------------------------------------------------

_FAMILIES = {"A", "B", "C", "D", "D4-triality", "E6", "E7", "E8", "F4", "G2"}

_DIMENSIONS = {
    "A": lambda l: l * (l + 2),
    "B": lambda l: l * (2 * l + 1),
    "C": lambda l: l * (2 * l + 1),
    "D": lambda l: l * (2 * l - 1),
    "D4-triality": lambda l: 28,
    "E6": lambda l: 78,
    "E7": lambda l: 133,
    "E8": lambda l: 248,
    "F4": lambda l: 52,
    "G2": lambda l: 14,
}

_EXCEPTIONAL_EXPONENTS = {
    # #G(F_q) = q^N prod (q^{d_i} - 1): (N, [d_i])
    "E6": (36, [2, 5, 6, 8, 9, 12]),
    "E7": (63, [2, 6, 8, 10, 12, 14, 18]),
    "E8": (120, [2, 8, 12, 14, 18, 20, 24, 30]),
    "F4": (24, [2, 6, 8, 12]),
    "G2": (6, [2, 6]),
}


@dataclass(frozen=True)
class GroupType:
    family: str
    rank: int
    twist: int = 1

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        self.validate()

    def validate(self):
        fam, l, t = self.family, self.rank, self.twist
        if fam == "A":
            if l < 1 or t not in (1, 2) or (l == 1 and t == 2):
                raise ValueError("A_l requires l >= 2 (l = 1 untwisted only)")
        elif fam == "B":
            if l < 2 or t != 1:
                raise ValueError("B_l requires l >= 2, untwisted")
        elif fam == "C":
            if l < 3 or t != 1:
                raise ValueError("C_l requires l >= 3, untwisted")
        elif fam == "D":
            if l < 4 or t not in (1, 2):
                raise ValueError("D_l requires l >= 4 with twist 1 or 2")
        elif fam == "D4-triality":
            if l != 4 or t != 3:
                raise ValueError("triality requires rank 4, twist 3")
        else:
            if t != 1:
                raise ValueError(f"{fam} has no outer forms in the table")

    def dimension(self) -> int:
        return _DIMENSIONS[self.family](self.rank)


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for p in _primes_upto(int(q ** 0.5) + 1) + [q]:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
    return False


def point_count(g: GroupType, q: int) -> int:
    """#G(F_q) from the Poincare-polynomial table of the simple groups."""
    if q < 2 or not _is_prime_power(q):
        raise ValueError("q must be a prime power >= 2")
    fam, l, t = g.family, g.rank, g.twist
    if fam == "A":
        if t == 1:
            return q ** (l * (l + 1) // 2) * _prod(q ** (k + 1) - 1 for k in range(1, l + 1))
        return q ** (l * (l + 1) // 2) * _prod(
            q ** (k + 1) - (-1) ** (k + 1) for k in range(1, l + 1))
    if fam in ("B", "C"):
        return q ** (l * l) * _prod(q ** (2 * k) - 1 for k in range(1, l + 1))
    if fam == "D":
        base = q ** (l * (l - 1)) * _prod(q ** (2 * k) - 1 for k in range(1, l))
        return base * (q ** l - 1 if t == 1 else q ** l + 1)
    if fam == "D4-triality":
        # (q^4 - eta)(q^4 - etabar) = q^8 + q^4 + 1 for primitive cube roots eta
        return q ** 12 * (q ** 2 - 1) * (q ** 8 + q ** 4 + 1) * (q ** 6 - 1)
    n_exp, degrees = _EXCEPTIONAL_EXPONENTS[fam]
    return q ** n_exp * _prod(q ** d - 1 for d in degrees)


def point_count_degree(g: GroupType) -> int:
    """Degree of #G(F_q) as a polynomial in q; equals dim G."""
    fam, l, t = g.family, g.rank, g.twist
    if fam == "A":
        return l * (l + 1) // 2 + sum(k + 1 for k in range(1, l + 1))
    if fam in ("B", "C"):
        return l * l + sum(2 * k for k in range(1, l + 1))
    if fam == "D":
        return l * (l - 1) + sum(2 * k for k in range(1, l)) + l
    if fam == "D4-triality":
        return 12 + 2 + 8 + 6
    n_exp, degrees = _EXCEPTIONAL_EXPONENTS[fam]
    return n_exp + sum(degrees)


def _prod(it) -> int:
    out = 1
    for v in it:
        out *= v
    return out


# ---------------------------------------------------------------------------
# covolume classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VolumeClass:
    """A covolume up to Q^x: rational class marker, pi power, and a symbolic
    L-part with a numeric evaluation."""

    pi_exp: int
    l_part: str
    numeric: float
    rational_class: str = "Q^x"

    def to_json(self) -> dict:
        return {
            "rational_class": self.rational_class,
            "pi_exp": self.pi_exp,
            "l_part": self.l_part,
            "numeric": self.numeric,
        }


def _zeta_k_numeric(d: int, s: float, terms: int = 200000) -> float:
    if d in (None, 1):
        return zeta_series(s, terms)
    chi = DirichletChar.quadratic(d)
    return zeta_series(s, terms) * l_series(chi, s, terms)


def covolume_class(case: str, params: dict) -> VolumeClass:
    """Covolume class per the corollary forms:

    - 'I' / 'II-split':  pi^(mt) zeta*_k(1-m), numerically
      sqrt(d_k) zeta_k(m) / pi^(m r).
    - 'II-nonsplit':     pi^(mt) L*(chi,1-m), numerically
      sqrt(|d_rel d_k|) L(chi,m) / pi^(m r).
    - 'III':             pi^(t+2 r2) zeta*_L(-1), numerically
      |d_L|^(3/2) zeta_L(2) / pi^(2 [L:Q]).
    """
    case = case.strip()
    if case in ("I", "II-split"):
        d_k = int(params["d_k"])
        m, t, r = int(params["m"]), int(params["t"]), int(params["r"])
        if not 1 <= t <= r:
            raise ValueError("need 1 <= t <= r")
        if m < 2:
            raise ValueError("need m >= 2")
        num = math.sqrt(d_k) * _zeta_k_numeric(d_k, float(m)) / math.pi ** (m * r)
        return VolumeClass(m * t, f"zeta*_k(1-{m}) for d_k={d_k}", num)
    if case == "II-nonsplit":
        d_k = int(params["d_k"])
        m, t, r = int(params["m"]), int(params["t"]), int(params["r"])
        if not 1 <= t <= r:
            raise ValueError("need 1 <= t <= r")
        # L(chi, m) = zeta_L(m) / zeta_k(m); zeta_L from a quartic minpoly or
        # a quadratic character over Q.
        if "l_minpoly" in params:
            ep = dedekind_euler(params["l_minpoly"], float(m), int(params.get("p_max", 10000)))
            zl = ep.value
            zk = _zeta_k_numeric(d_k, float(m))
            l_chi = zl / zk
        elif "chi_d" in params:
            chi = DirichletChar.quadratic(int(params["chi_d"]))
            l_chi = l_series(chi, float(m), 200000)
        else:
            raise ValueError("II-nonsplit needs l_minpoly or chi_d")
        d_rel = float(params.get("d_rel_times_dk", d_k))
        num = math.sqrt(abs(d_rel)) * l_chi / math.pi ** (m * r)
        return VolumeClass(m * t, f"L*(chi,1-{m})", num)
    if case == "III":
        r1, r2, t = int(params["r1"]), int(params["r2"]), int(params["t"])
        if r2 < 1 or not 0 <= t <= r1:
            raise ValueError("need r2 >= 1 and 0 <= t <= r1")
        deg = r1 + 2 * r2
        d_l = abs(int(params["d_L"]))
        if "l_minpoly" in params:
            ep = dedekind_euler(params["l_minpoly"], 2.0, int(params.get("p_max", 10000)))
            zl2 = ep.value
        elif deg == 2 and r1 == 0:
            chi = DirichletChar.quadratic(-d_l)
            zl2 = zeta_series(2.0, 200000) * l_series(chi, 2.0, 200000)
        else:
            raise ValueError("III needs l_minpoly (or an imaginary quadratic d_L)")
        num = d_l ** 1.5 * zl2 / math.pi ** (2 * deg)
        return VolumeClass(t + 2 * r2, "zeta*_L(-1)", num)
    raise ValueError(f"unknown case {case!r}")
