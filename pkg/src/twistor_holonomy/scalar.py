"""Exact arithmetic in the multi-quadratic field Q(sqrt2, sqrt3, sqrt5).

Elements are stored as eight rational coefficients.  Internally a radical is
indexed by a bitmask over the primes (2, 3, 5), so that the product of two
basis radicals is a single XOR plus a rational factor.
"""

from __future__ import annotations

import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

from .errors import DivisionByZero, NotInField, UnsupportedAngle

Rational = Fraction
Scalar = Union[int, Fraction, "MQ"]

PRIMES = (2, 3, 5)
# mask -> squarefree radicand
_RADICAND = tuple(
    reduce(lambda acc, i: acc * PRIMES[i] if mask >> i & 1 else acc, range(3), 1)
    for mask in range(8)
)
# public ordering {1, √2, √3, √5, √6, √10, √15, √30}
BASIS = (1, 2, 3, 5, 6, 10, 15, 30)
_BASIS_MASKS = tuple(_RADICAND.index(r) for r in BASIS)

# _MUL[i][j] = (rational factor, mask) for sqrt(r_i) * sqrt(r_j)
_MUL = tuple(tuple((_RADICAND[i & j], i ^ j) for j in range(8)) for i in range(8))

_ZERO = Fraction(0)
_DEC_PREC = 60


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class MQ:
    """Immutable element of Q(sqrt2, sqrt3, sqrt5)."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coefficients: Iterable = (0,) * 8):
        coeffs = [_frac(c) for c in coefficients]
        if len(coeffs) != 8:
            raise ValueError("MQ needs exactly 8 coefficients")
        c = [_ZERO] * 8
        for value, mask in zip(coeffs, _BASIS_MASKS):
            c[mask] = value
        self._c = tuple(c)
        self._hash = None

    @classmethod
    def _from_masks(cls, c) -> MQ:
        obj = cls.__new__(cls)
        obj._c = tuple(c)
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, r) -> MQ:
        c = [_ZERO] * 8
        c[0] = _frac(r)
        return cls._from_masks(c)

    @classmethod
    def radical(cls, n: int, coefficient=1) -> MQ:
        """coefficient * sqrt(n) for a squarefree n dividing 30."""
        if n not in _RADICAND:
            raise NotInField(f"sqrt({n}) is not a basis radical")
        c = [_ZERO] * 8
        c[_RADICAND.index(n)] = _frac(coefficient)
        return cls._from_masks(c)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients over (1, √2, √3, √5, √6, √10, √15, √30)."""
        return tuple(self._c[m] for m in _BASIS_MASKS)

    def terms(self):
        """Yield (radicand, coefficient) pairs with nonzero coefficient."""
        for r, m in zip(BASIS, _BASIS_MASKS):
            if self._c[m]:
                yield r, self._c[m]

    def is_rational(self) -> bool:
        return not any(self._c[1:])

    def rational_part(self) -> Fraction:
        return self._c[0]

    def radicands(self) -> set[int]:
        return {r for r, _ in self.terms() if r != 1}

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other) -> MQ | None:
        if isinstance(other, MQ):
            return other
        if isinstance(other, (int, Fraction)):
            return MQ.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return MQ._from_masks(a + b for a, b in zip(self._c, o._c))

    __radd__ = __add__

    def __neg__(self):
        return MQ._from_masks(-a for a in self._c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return MQ._from_masks(a - b for a, b in zip(self._c, o._c))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MQ._from_masks(a * other for a in self._c)
        if not isinstance(other, MQ):
            return NotImplemented
        out = [_ZERO] * 8
        for i, a in enumerate(self._c):
            if not a:
                continue
            row = _MUL[i]
            for j, b in enumerate(other._c):
                if b:
                    factor, mask = row[j]
                    out[mask] += factor * a * b
        return MQ._from_masks(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, prime: int) -> MQ:
        """Apply the automorphism sqrt(prime) -> -sqrt(prime)."""
        bit = 1 << PRIMES.index(prime)
        return MQ._from_masks(-a if m & bit else a for m, a in enumerate(self._c))

    def inverse(self) -> MQ:
        if not self:
            raise DivisionByZero("inverse of zero in Q(√2,√3,√5)")
        # Multiplying by a conjugate clears one prime from the support.
        for idx in (2, 1, 0):
            bit = 1 << idx
            if any(a for m, a in enumerate(self._c) if m & bit):
                conj = self.conjugate(PRIMES[idx])
                return conj * (self * conj).inverse()
        return MQ.rational(1 / self._c[0])

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c) if not self.is_rational() else hash(self._c[0])
        return self._hash

    def __bool__(self):
        return any(self._c)

    def sign(self) -> int:
        if not self:
            return 0
        return 1 if self.to_decimal() > 0 else -1

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # -- conversion ---------------------------------------------------
    def to_decimal(self, prec: int = _DEC_PREC) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = prec
            total = Decimal(0)
            for r, c in self.terms():
                term = Decimal(c.numerator) / Decimal(c.denominator)
                if r != 1:
                    term *= Decimal(r).sqrt()
                total += term
            return +total

    def __float__(self):
        return float(self.to_decimal())

    def __repr__(self):
        return f"MQ({self})"

    def __str__(self):
        parts = []
        for r, c in self.terms():
            neg = c < 0
            mag = -c if neg else c
            if r == 1:
                body = str(mag)
            elif mag == 1:
                body = f"sqrt({r})"
            else:
                body = f"{mag}*sqrt({r})"
            parts.append(("-" if neg else "+", body))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = MQ.rational(0)
ONE = MQ.rational(1)
SQRT2 = MQ.radical(2)
SQRT3 = MQ.radical(3)
SQRT5 = MQ.radical(5)
RHO = (ONE + SQRT5) * Fraction(1, 2)


def mq_add(a: MQ, b: MQ) -> MQ:
    return a + b


def mq_mul(a: MQ, b: MQ) -> MQ:
    return a * b


def mq_inv(a: MQ) -> MQ:
    return a.inverse()


def mq_to_float(x: MQ) -> float:
    return float(x)


# -- square roots -----------------------------------------------------

def _rational_sqrt(r: Fraction) -> Fraction | None:
    if r < 0:
        return None
    n, d = r.numerator, r.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


def _split(x: MQ, idx: int) -> tuple[MQ, MQ]:
    """x = u + v*sqrt(p) with u, v free of the prime at position idx."""
    bit = 1 << idx
    p = PRIMES[idx]
    u = [_ZERO] * 8
    v = [_ZERO] * 8
    for m, a in enumerate(x._c):
        if m & bit:
            v[m ^ bit] = a
        else:
            u[m] = a
    return MQ._from_masks(u), MQ._from_masks(v)


def _join(s: MQ, t: MQ, idx: int) -> MQ:
    return s + t * MQ.radical(PRIMES[idx])


def _sqrt_tower(x: MQ, depth: int) -> MQ | None:
    """A square root of x in Q(sqrt p_0, ..., sqrt p_{depth-1}) or None."""
    if depth == 0:
        r = _rational_sqrt(x._c[0])
        return None if r is None else MQ.rational(r)
    idx = depth - 1
    p = PRIMES[idx]
    u, v = _split(x, idx)
    # (s + t√p)^2 = s^2 + p t^2 + 2 s t √p
    if not v:
        s = _sqrt_tower(u, idx)
        if s is not None:
            return s
        t = _sqrt_tower(u * Fraction(1, p), idx)
        return None if t is None else _join(ZERO, t, idx)
    disc = _sqrt_tower(u * u - v * v * p, idx)
    if disc is None:
        return None
    for cand in ((u + disc) * Fraction(1, 2), (u - disc) * Fraction(1, 2)):
        s = _sqrt_tower(cand, idx)
        if s is None or not s:
            continue
        t = v / (s * 2)
        y = _join(s, t, idx)
        if y * y == x:
            return y
    return None


def mq_sqrt(x: MQ) -> MQ:
    """Nonnegative square root of x, verified by exact squaring."""
    x = MQ._coerce(x)
    if x.sign() < 0:
        raise NotInField(f"sqrt of negative value {x}")
    if not x:
        return ZERO
    y = _sqrt_tower(x, 3)
    if y is None or y * y != x:
        raise NotInField(f"sqrt({x}) is not in Q(√2,√3,√5)")
    return -y if y.sign() < 0 else y


# -- angles -----------------------------------------------------------

SUPPORTED_DENOMINATORS = frozenset({1, 2, 3, 4, 5, 6, 8, 10, 12})

# cos(q*pi) for q in [0, 1/2]; None where the value leaves the field
_COS_TABLE = {
    Fraction(0): ONE,
    Fraction(1, 12): (MQ.radical(6) + SQRT2) * Fraction(1, 4),
    Fraction(1, 10): None,
    Fraction(1, 8): None,
    Fraction(1, 6): SQRT3 * Fraction(1, 2),
    Fraction(1, 5): RHO * Fraction(1, 2),
    Fraction(1, 4): SQRT2 * Fraction(1, 2),
    Fraction(3, 10): None,
    Fraction(1, 3): MQ.rational(Fraction(1, 2)),
    Fraction(3, 8): None,
    Fraction(2, 5): (SQRT5 - 1) * Fraction(1, 4),
    Fraction(5, 12): (MQ.radical(6) - SQRT2) * Fraction(1, 4),
    Fraction(1, 2): ZERO,
}


class Angle:
    """theta = q*pi with q reduced into [0, 2)."""

    __slots__ = ("q",)

    def __init__(self, q):
        self.q = _frac(q) % 2

    @classmethod
    def parse(cls, text: str) -> Angle:
        return cls(Fraction(text.strip()))

    @property
    def radians(self) -> float:
        return float(self.q) * math.pi

    def __eq__(self, other):
        return isinstance(other, Angle) and self.q == other.q

    def __hash__(self):
        return hash(("Angle", self.q))

    def __repr__(self):
        return f"Angle({self.q})"

    def __str__(self):
        return str(self.q)

    def halved(self) -> Angle:
        return Angle(self.q / 2)


def _fold(q: Fraction) -> tuple[Fraction, int]:
    """Reduce cos(q*pi) to sign * cos(r*pi) with r in [0, 1/2]."""
    q = q % 2
    if q > 1:
        q = 2 - q
    if q > Fraction(1, 2):
        return 1 - q, -1
    return q, 1


def exact_cos(theta: Angle) -> MQ:
    q = theta.q
    if q.denominator not in SUPPORTED_DENOMINATORS:
        raise UnsupportedAngle(f"cos({q}π): denominator {q.denominator} unsupported")
    r, sgn = _fold(q)
    value = _COS_TABLE[r]
    if value is None:
        raise UnsupportedAngle(f"cos({q}π) is not in Q(√2,√3,√5)")
    return value if sgn > 0 else -value


def exact_cos_sq(theta: Angle) -> MQ:
    try:
        c = exact_cos(theta)
        return c * c
    except UnsupportedAngle:
        if theta.q.denominator not in SUPPORTED_DENOMINATORS:
            raise
    return (ONE + exact_cos(Angle(2 * theta.q))) * Fraction(1, 2)


def exact_sin_sq(theta: Angle) -> MQ:
    return ONE - exact_cos_sq(theta)


# -- text grammar -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt|rho)|(.))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok is None or tok.isspace():
            pos = m.end()
            continue
        if m.group(3) and tok not in "+-*/^()":
            raise ValueError(f"unexpected character {tok!r} in {text!r}")
        tokens.append(tok)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"malformed scalar expression {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> MQ:
        value = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if not tok.isdigit():
                raise ValueError(f"exponent must be an integer in {self.text!r}")
            base = base ** (sign * int(tok))
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return MQ.rational(int(tok))
        if tok == "rho":
            return RHO
        if tok == "sqrt":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return mq_sqrt(inner)
        if tok == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError(f"malformed scalar expression {self.text!r}")


def parse_scalar(text: str) -> MQ:
    """Parse e.g. ``1/2 - sqrt(2)``, ``-(1/3)*rho^-2`` or ``sqrt(2/3)``."""
    return _Parser(text).parse()
