"""Rotation pairs (C'_x, C'_y) built from angle triplets, and their traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import DegenerateAxis, ExcludedCase, NotInField, UnsupportedAngle
from .scalar import (
    MQ,
    ONE,
    RHO,
    SQRT3,
    SQRT5,
    ZERO,
    Angle,
    exact_cos,
    exact_sin_sq,
    mq_sqrt,
)

P1 = np.array([1.0, 0.0, 0.0])
P2 = np.array([0.0, 1.0, 0.0])
P3 = np.array([0.0, 0.0, 1.0])

ORTHO_TOL = 1e-12


# name -> exact cos^2 of the icosahedral / octahedral constants
def _named_cos_sq() -> dict[str, MQ]:
    inv5 = SQRT5 * Fraction(1, 5)
    inv15 = SQRT5 * Fraction(1, 15)
    return {
        "phi23": RHO * RHO * Fraction(1, 3),
        "phi25_1": RHO * inv5,
        "phi25_2": RHO ** -1 * inv5,
        "phi33": MQ.rational(Fraction(5, 9)),
        "phi35_1": RHO ** 3 * inv15,
        "phi35_2": RHO ** -3 * inv15,
        "phi55": MQ.rational(Fraction(1, 5)),
    }


_NAMED = _named_cos_sq()
NAMED_PHI = tuple(_NAMED)


def _sqrt_or_none(x: MQ) -> Optional[MQ]:
    try:
        return mq_sqrt(x)
    except NotInField:
        return None


@dataclass(frozen=True)
class CosPhi:
    """cos(phi) of the angle between p1 and the axis U p1.

    ``tag`` is one of ``zero``, ``rat``, ``sqrt``, a named constant from
    ``NAMED_PHI``, or ``float`` (numeric mode only, no exact data).
    """

    tag: str
    param: Optional[Fraction] = None
    cos_sq: Optional[MQ] = field(default=None, compare=False)
    cos_exact: Optional[MQ] = field(default=None, compare=False)
    cos_float: float = field(default=0.0, compare=False)

    @classmethod
    def zero(cls) -> CosPhi:
        return cls("zero", None, ZERO, ZERO, 0.0)

    @classmethod
    def rational(cls, r) -> CosPhi:
        r = Fraction(r)
        if r == 0:
            return cls.zero()
        _check_range(float(r))
        exact = MQ.rational(r)
        return cls("rat", r, exact * exact, exact, float(r))

    @classmethod
    def sqrt_rational(cls, r) -> CosPhi:
        """cos(phi) = sqrt(r)."""
        r = Fraction(r)
        if r == 0:
            return cls.zero()
        _check_range(float(r))
        sq = MQ.rational(r)
        return cls("sqrt", r, sq, _sqrt_or_none(sq), _sqrt_float(sq))

    @classmethod
    def named(cls, name: str) -> CosPhi:
        sq = _NAMED[name]
        return cls(name, None, sq, _sqrt_or_none(sq), _sqrt_float(sq))

    @classmethod
    def numeric(cls, value: float) -> CosPhi:
        _check_range(value)
        return cls("float", None, None, None, float(value))

    @classmethod
    def parse(cls, text: str) -> CosPhi:
        """CLI grammar: ``0``, ``r``, ``sqrt(r)`` or a named constant."""
        s = text.strip().lower().replace(" ", "")
        if s in _NAMED:
            return cls.named(s)
        if s.startswith("sqrt(") and s.endswith(")"):
            return cls.sqrt_rational(Fraction(s[5:-1]))
        try:
            return cls.rational(Fraction(s))
        except ValueError:
            return cls.numeric(float(s))

    @property
    def is_exact(self) -> bool:
        return self.cos_sq is not None

    @property
    def sin_float(self) -> float:
        if self.cos_sq is not None:
            return _sqrt_float(ONE - self.cos_sq)
        return math.sqrt(max(0.0, 1.0 - self.cos_float ** 2))

    def __str__(self):
        if self.tag == "zero":
            return "0"
        if self.tag == "rat":
            return str(self.param)
        if self.tag == "sqrt":
            return f"sqrt({self.param})"
        if self.tag == "float":
            return repr(self.cos_float)
        return self.tag


def _sqrt_float(x: MQ) -> float:
    return float(x.to_decimal().sqrt())


def _check_range(c: float) -> None:
    if not 0.0 <= c < 1.0:
        raise ValueError(f"cos(phi) must lie in [0, 1), got {c}")


def vocabulary() -> list[CosPhi]:
    """The twelve cos(phi) values occurring in the finite-group catalog."""
    return [
        CosPhi.zero(),
        CosPhi.rational(Fraction(1, 3)),
        CosPhi.sqrt_rational(Fraction(1, 3)),
        CosPhi.sqrt_rational(Fraction(2, 3)),
        CosPhi.sqrt_rational(Fraction(1, 2)),
    ] + [CosPhi.named(n) for n in NAMED_PHI]


class Mode(Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


AngleLike = Union[Angle, float]


@dataclass(frozen=True)
class Triplet:
    """(theta'_x, theta'_y, phi).

    Exact-mode angles are :class:`Angle` (rational multiples of pi); numeric
    mode stores plain radians.
    """

    theta_x: AngleLike
    theta_y: AngleLike
    phi: CosPhi
    mode: Mode = Mode.EXACT

    @classmethod
    def exact(cls, qx, qy, phi: CosPhi) -> Triplet:
        return cls(Angle(qx), Angle(qy), phi, Mode.EXACT)

    @classmethod
    def numeric(cls, tx: float, ty: float, phi: CosPhi) -> Triplet:
        for t in (tx, ty):
            if not 0.0 < t < 2 * math.pi:
                raise ValueError(f"numeric angles must lie in (0, 2π), got {t}")
        return cls(float(tx), float(ty), phi, Mode.NUMERIC)

    @property
    def in_exact_domain(self) -> bool:
        if self.mode is not Mode.EXACT or not self.phi.is_exact:
            return False
        return all(0 < a.q <= 1 for a in (self.theta_x, self.theta_y))

    def halvings(self) -> list[Triplet]:
        """(theta_x/2, theta_y, phi) and (theta_x, theta_y/2, phi)."""
        return [
            Triplet(self.theta_x.halved(), self.theta_y, self.phi, self.mode),
            Triplet(self.theta_x, self.theta_y.halved(), self.phi, self.mode),
        ]

    def __str__(self):
        if self.mode is Mode.EXACT:
            return f"({self.theta_x}π, {self.theta_y}π, {self.phi})"
        return f"({self.theta_x}, {self.theta_y}, {self.phi})"


def cos_sin(theta: AngleLike) -> tuple[float, float]:
    """Float cos/sin, taken from exact values whenever they are known."""
    if not isinstance(theta, Angle):
        return math.cos(theta), math.sin(theta)
    q = theta.q
    try:
        c = float(exact_cos(theta))
        s_abs = float(exact_sin_sq(theta).to_decimal().sqrt())
    except UnsupportedAngle:
        rad = float(q) * math.pi
        return math.cos(rad), math.sin(rad)
    if q == 0 or q == 1:
        return c, 0.0
    return c, (s_abs if q < 1 else -s_abs)


def c_of_theta(theta: AngleLike) -> np.ndarray:
    """Rotation by theta in the (2,3)-plane, fixing p1."""
    c, s = cos_sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def u_of_phi(phi: CosPhi) -> np.ndarray:
    """Rotation by phi in the (1,2)-plane; U p1 makes angle phi with p1."""
    c, s = phi.cos_float, phi.sin_float
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


class RotationPair(NamedTuple):
    cx: np.ndarray
    cy: np.ndarray


def build_pair(t: Triplet) -> RotationPair:
    u = u_of_phi(t.phi)
    return RotationPair(c_of_theta(t.theta_x), u @ c_of_theta(t.theta_y) @ u.T)


def is_rotation(r: np.ndarray, tol: float = ORTHO_TOL) -> bool:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    ortho = np.max(np.abs(r.T @ r - np.eye(3)))
    return bool(ortho < tol and abs(np.linalg.det(r) - 1.0) < tol)


def trace_product_exact(t: Triplet) -> MQ:
    """tr(C'_x C'_y) in Q(√2,√3,√5).

    The cross term -2 sin(tx) sin(ty) cos(phi) is the only one needing an odd
    power of a radical that may leave the field; it is recovered as the square
    root of its square, with sign + whenever both sines are nonnegative,
    i.e. for 0 <= θ' <= π (θ' = 0 is allowed here so the identity pair
    evaluates to 3).
    """
    if t.mode is not Mode.EXACT or not t.phi.is_exact:
        raise ValueError("trace_product_exact needs an exact-mode triplet")
    if not all(0 <= a.q <= 1 for a in (t.theta_x, t.theta_y)):
        raise ValueError(f"exact mode requires 0 <= θ'_x, θ'_y <= π, got {t}")
    cx = exact_cos(t.theta_x)
    cy = exact_cos(t.theta_y)
    cos2 = t.phi.cos_sq
    sin2 = ONE - cos2
    cross = mq_sqrt(exact_sin_sq(t.theta_x) * exact_sin_sq(t.theta_y) * cos2 * 4)
    return cx * cy - cross + (ONE + cx * cy) * cos2 + (cx + cy) * sin2


def trace_product_numeric(t: Triplet) -> float:
    cx, sx = cos_sin(t.theta_x)
    cy, sy = cos_sin(t.theta_y)
    c, s = t.phi.cos_float, t.phi.sin_float
    return cx * cy - 2 * sx * sy * c + (1 + cx * cy) * c * c + (cx + cy) * s * s


def _axis_sign(v: np.ndarray) -> np.ndarray:
    v = np.where(np.abs(v) < 1e-14, 0.0, v)
    v = v / np.linalg.norm(v)
    for x in v:
        if abs(x) > 1e-12:
            return v if x > 0 else -v
    return v


def axis_angle(r: np.ndarray, strict: bool = False) -> tuple[np.ndarray, float]:
    """Unit axis (first nonzero coordinate positive) and angle in [0, pi].

    The identity has no axis; ``(p1, 0)`` is returned unless ``strict``.
    """
    r = np.asarray(r, dtype=float)
    # atan2 keeps full precision near 0 and pi, where acos of the trace does not
    skew = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    angle = math.atan2(0.5 * float(np.linalg.norm(skew)), 0.5 * (np.trace(r) - 1.0))
    if np.max(np.abs(r - np.eye(3))) < 1e-12:
        if strict:
            raise DegenerateAxis("identity rotation has no axis")
        return P1.copy(), 0.0
    _, _, vt = np.linalg.svd(r - np.eye(3))
    return _axis_sign(vt[-1]), angle


def check_prop42(pair: RotationPair) -> bool:
    """Eigenvalues of C'_x C'_y and C'_y C'_x agree (via their traces)."""
    a, b = pair
    return bool(abs(np.trace(a @ b) - np.trace(b @ a)) < 1e-12)


def _is_half_turn(r: np.ndarray) -> bool:
    return abs(np.trace(r) + 1.0) < 1e-9


def check_prop43(pair: RotationPair) -> bool:
    """Fixed axes of C'_x C'_y and C'_y C'_x are linearly independent."""
    a, b = pair
    if _is_half_turn(a) and _is_half_turn(b):
        raise ExcludedCase("(θ'_x, θ'_y) = (π, π) is excluded")
    n1, _ = axis_angle(a @ b)
    n2, _ = axis_angle(b @ a)
    return bool(np.linalg.norm(np.cross(n1, n2)) > 1e-8)
