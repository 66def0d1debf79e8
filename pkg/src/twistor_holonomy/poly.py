"""Characteristic and minimal polynomials of the non-unit eigenvalue zeta.

Root-of-unity detection is done by comparing the monic minimal polynomial
against every cyclotomic polynomial of the same degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from .errors import (
    DomainError,
    HolonomyError,
    MixedRadicals,
    NotMonic,
    NotOnUnitCircle,
    NotPrime,
)
from .scalar import MQ, ONE

_ZERO = Fraction(0)


class RationalPoly:
    """Polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def from_high(cls, coeffs: Sequence) -> RationalPoly:
        """Build from coefficients listed highest degree first."""
        return cls(list(coeffs)[::-1])

    @classmethod
    def x(cls) -> RationalPoly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def high_first(self) -> list[Fraction]:
        return list(self.coeffs[::-1])

    def is_monic(self) -> bool:
        return self.lc == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def monic(self) -> RationalPoly:
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic form")
        lc = self.lc
        return RationalPoly([c / lc for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs])

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (_ZERO,) * (n - len(other.coeffs))
        return RationalPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = RationalPoly([1])
        for _ in range(n):
            result = result * self
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [_ZERO] * max(0, len(rem) - dq)
        lc = other.lc
        for k in range(len(rem) - dq - 1, -1, -1):
            coef = rem[k + dq] / lc
            quot[k] = coef
            if coef:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= coef * b
        return RationalPoly(quot), RationalPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> RationalPoly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def derivative(self) -> RationalPoly:
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if not isinstance(x, (float, complex)) else float(c))
        return acc

    def compose(self, inner: RationalPoly) -> RationalPoly:
        acc = RationalPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + RationalPoly([c])
        return acc

    def __repr__(self):
        return f"RationalPoly.from_high({[str(c) for c in self.high_first()]})"

    def __str__(self):
        return format_poly(self.coeffs)


def _as_poly(x) -> RationalPoly:
    if isinstance(x, RationalPoly):
        return x
    return RationalPoly([x])


def format_poly(coeffs: Sequence, var: str = "λ") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        neg = c < 0 if not isinstance(c, MQ) else c.sign() < 0
        mag = -c if neg else c
        if isinstance(mag, MQ) and not mag.is_rational():
            cs = f"({mag})"
        else:
            cs = str(mag.rational_part() if isinstance(mag, MQ) else mag)
            if "/" in cs and mono:
                cs = f"({cs})"
        body = mono if (cs == "1" and mono) else (f"{cs}{mono}" if mono else cs)
        terms.append((neg, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, body in terms[1:]:
        out += f" {'-' if neg else '+'} {body}"
    return out


def poly_gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


# -- characteristic polynomial -----------------------------------------

class QuadExtPoly(NamedTuple):
    """Polynomial with coefficients in Q(√2,√3,√5), lowest degree first."""

    coeffs: tuple

    def __str__(self):
        return format_poly(self.coeffs)


class CharPoly(NamedTuple):
    """chi(λ) = (λ - 1) * quadratic, quadratic = λ^2 + aλ + 1."""

    linear: RationalPoly
    quadratic: QuadExtPoly

    @property
    def a(self) -> MQ:
        return self.quadratic.coeffs[1]

    def __str__(self):
        return f"(λ - 1)({self.quadratic})"


def char_poly(tr: MQ) -> CharPoly:
    a = ONE - tr
    return CharPoly(RationalPoly([-1, 1]), QuadExtPoly((ONE, a, ONE)))


# -- minimal polynomial of zeta -----------------------------------------

def _integer_scaling(f: RationalPoly) -> tuple[list[int], int]:
    """Monic integer g(μ) = m^deg f(μ/m) for monic rational f."""
    m = math.lcm(*(c.denominator for c in f.coeffs))
    deg = f.degree
    out = []
    for k, c in enumerate(f.coeffs):
        v = c * m ** (deg - k)
        assert v.denominator == 1
        out.append(int(v))
    return out, m


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def has_rational_root(f: RationalPoly) -> bool:
    g, m = _integer_scaling(f.monic())
    if g[0] == 0:
        return True
    for d in _divisors(g[0]):
        for r in (d, -d):
            if sum(c * r ** k for k, c in enumerate(g)) == 0:
                return True
    return False


def has_quadratic_factor(f: RationalPoly) -> bool:
    """Whether a monic quartic splits into two rational quadratics."""
    if f.degree != 4:
        raise ValueError("quadratic-factor test is for quartics")
    g, _ = _integer_scaling(f.monic())
    e0, c1, b2, a3 = g[0], g[1], g[2], g[3]
    # (μ^2 + pμ + s)(μ^2 + qμ + t): s t = e0, p + q = a3, p t + q s = c1,
    # s + t + p q = b2; integer solutions suffice by Gauss's lemma
    if e0 == 0:
        return True
    for d in _divisors(e0):
        for s in (d, -d):
            t = e0 // s
            if s != t:
                num = c1 - s * a3
                if num % (t - s):
                    continue
                p = num // (t - s)
                q = a3 - p
                if s + t + p * q == b2:
                    return True
            else:
                if c1 != s * a3:
                    continue
                # p, q roots of z^2 - a3 z + (b2 - 2s)
                disc = a3 * a3 - 4 * (b2 - 2 * s)
                if disc >= 0 and math.isqrt(disc) ** 2 == disc and (a3 + math.isqrt(disc)) % 2 == 0:
                    return True
    return False


def is_irreducible_small(f: RationalPoly) -> bool:
    """Irreducibility over Q for degree <= 4."""
    d = f.degree
    if d <= 1:
        return d == 1
    if d > 4:
        raise ValueError("constructive irreducibility test handles degree <= 4")
    if has_rational_root(f):
        return False
    return d < 4 or not has_quadratic_factor(f)


def minimal_poly_zeta(tr: MQ) -> RationalPoly:
    """Minimal polynomial over Q of a root of λ^2 + (1 - tr)λ + 1."""
    a = ONE - tr
    if a.is_rational():
        r = a.rational_part()
        if r == 2:
            return RationalPoly([1, 1])
        if r == -2:
            return RationalPoly([-1, 1])
        if abs(r) > 2:
            raise NotOnUnitCircle(f"|1 - tr| = {abs(r)} > 2")
        return RationalPoly([1, r, 1])
    rads = a.radicands()
    if len(rads) != 1:
        raise MixedRadicals(f"coefficient {a} involves {sorted(rads)}")
    if abs(float(a)) > 2:
        raise NotOnUnitCircle(f"|1 - tr| = {abs(float(a))} > 2")
    (d,) = rads
    p = a.rational_part()
    q = dict(a.terms())[d]
    s = 2 * p              # a + conj(a)
    n = p * p - d * q * q  # a * conj(a)
    f = RationalPoly([1, s, 2 + n, s, 1])
    if not is_irreducible_small(f):
        raise HolonomyError(f"quartic {f} unexpectedly reducible")
    return f


# -- cyclotomic test ---------------------------------------------------

def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> RationalPoly:
    """Phi_n by exact division of λ^n - 1 by Phi_d for proper divisors d."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    f = RationalPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            f = f.exact_div(cyclotomic(d))
    return f


class RootOfUnityVerdict(NamedTuple):
    order: Optional[int]

    @property
    def is_root_of_unity(self) -> bool:
        return self.order is not None

    def __str__(self):
        return f"RootOfUnity({self.order})" if self.order else "NotRootOfUnity"


NOT_ROOT_OF_UNITY = RootOfUnityVerdict(None)


def phi_inverse(degree: int) -> list[int]:
    """All n with euler_phi(n) == degree (phi(n) >= sqrt(n/2) bounds the search)."""
    bound = 2 * degree * degree + 4
    return [n for n in range(1, bound + 1) if euler_phi(n) == degree]


def is_cyclotomic(p: RationalPoly) -> RootOfUnityVerdict:
    if not p.coeffs or not p.is_monic():
        raise NotMonic(f"{p} is not monic")
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    if not p.is_integral():
        return NOT_ROOT_OF_UNITY
    for n in phi_inverse(p.degree):
        if cyclotomic(n) == p:
            return RootOfUnityVerdict(n)
    return NOT_ROOT_OF_UNITY


# -- Chebyshev pipeline ----------------------------------------------

@lru_cache(maxsize=None)
def chebyshev(m: int) -> RationalPoly:
    """T_m with T_m(cos x) = cos(m x)."""
    if m < 0:
        raise ValueError("Chebyshev degree must be nonnegative")
    if m == 0:
        return RationalPoly([1])
    if m == 1:
        return RationalPoly.x()
    return RationalPoly([0, 2]) * chebyshev(m - 1) - chebyshev(m - 2)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def cos_minpoly(n: int) -> RationalPoly:
    """Monic minimal polynomial of cos(2π/n) for an odd prime n.

    T_n(X) - 1 vanishes simply at X = 1 and doubly at each cos(2jπ/n),
    so the squarefree part of (T_n - 1)/(X - 1) is the answer.
    """
    if not _is_prime(n) or n == 2:
        raise NotPrime(f"{n} is not an odd prime")
    g = (chebyshev(n) - 1).exact_div(RationalPoly([-1, 1]))
    return g.exact_div(poly_gcd(g, g.derivative())).monic()


def cos_minpoly_structure_ok(f: RationalPoly) -> bool:
    """b_delta = 1, 2^(delta-k) b_k integral, 2^delta b_0 an odd integer."""
    delta = f.degree
    if f.lc != 1:
        return False
    for k in range(1, delta):
        if (f.coeffs[k] * 2 ** (delta - k)).denominator != 1:
            return False
    b0 = f.coeffs[0] * 2 ** delta
    return b0.denominator == 1 and b0.numerator % 2 == 1


def symmetric_substitute(f: RationalPoly) -> RationalPoly:
    """λ^δ F(λ + 1 + 1/λ) for monic F of degree δ."""
    if not f.is_monic():
        raise NotMonic(f"{f} is not monic")
    delta = f.degree
    base = RationalPoly([1, 1, 1])
    out = RationalPoly()
    for k, b in enumerate(f.coeffs):
        out = out + base ** k * RationalPoly([0] * (delta - k) + [b])
    return out


# -- verdicts ----------------------------------------------------------

class Complexity(Enum):
    INFINITE_CERTIFIED = "InfiniteCertified"
    FINITE_CANDIDATE = "FiniteCandidate"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ComplexityVerdict:
    kind: Complexity
    order: Optional[int] = None
    trace: Optional[MQ] = None
    minpoly: Optional[RationalPoly] = None
    reason: str = ""

    def __str__(self):
        if self.kind is Complexity.FINITE_CANDIDATE:
            return f"FiniteCandidate({self.order})"
        return self.kind.value


def complexity_verdict(t) -> ComplexityVerdict:
    from .rotation import trace_product_exact

    try:
        tr = trace_product_exact(t)
    except DomainError as exc:
        return ComplexityVerdict(Complexity.INCONCLUSIVE, reason=str(exc))
    f = minimal_poly_zeta(tr)
    v = is_cyclotomic(f)
    if v.is_root_of_unity:
        return ComplexityVerdict(Complexity.FINITE_CANDIDATE, v.order, tr, f)
    return ComplexityVerdict(Complexity.INFINITE_CERTIFIED, None, tr, f)
