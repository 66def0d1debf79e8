"""SO(4) connections with constant coefficients on the torus and their holonomy.

The connection is d + P1 dx + P2 dy with P1, P2 skew, chosen so that
exp(-2*pi*P1) and exp(-2*pi*P2) are the lifted period matrices.  Because the
coefficients are constant, parallel transport along an axis-aligned segment
is a single matrix exponential.

Product convention: ``transport`` multiplies the segment matrices in curve
order, A_1 A_2 ... A_k, i.e. each period relation is applied on the right of
the frame accumulated so far.  ``holonomy_of_curve`` therefore equals the
word C_{axis_1}^{s_1} C_{axis_2}^{s_2} ... in the 3x3 period matrices.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import NotUnit, SchurFailure

TWO_PI = 2 * math.pi


def lift_so3_to_so4(c: np.ndarray) -> np.ndarray:
    """Block embedding diag(1, C)."""
    out = np.eye(4)
    out[1:, 1:] = np.asarray(c, dtype=float)
    return out


def b_tilde(b: Sequence[float]) -> np.ndarray:
    b1, b2, b3, b4 = (float(x) for x in b)
    if abs(math.sqrt(b1 * b1 + b2 * b2 + b3 * b3 + b4 * b4) - 1.0) > 1e-12:
        raise NotUnit(f"b must be a unit 4-vector, got {list(b)}")
    return np.array(
        [
            [b1, -b2, -b3, -b4],
            [b2, b1, b4, -b3],
            [b3, -b4, b1, b2],
            [b4, b3, -b2, b1],
        ]
    )


def is_so4(m: np.ndarray, tol: float = 1e-11) -> bool:
    m = np.asarray(m, dtype=float)
    return bool(
        m.shape == (4, 4)
        and np.max(np.abs(m.T @ m - np.eye(4))) < tol
        and abs(np.linalg.det(m) - 1.0) < tol
    )


def so4_exp(p: np.ndarray) -> np.ndarray:
    """Matrix exponential (Pade scaling-and-squaring)."""
    return scipy.linalg.expm(np.asarray(p, dtype=float))


def rotation_log_blocks(m: np.ndarray) -> np.ndarray:
    """Principal logarithm L of an orthogonal matrix with det +1.

    Angles lie in (-pi, pi]; a pair of -1 eigenvalues becomes a +pi block.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    try:
        t, z = scipy.linalg.schur(m, output="real")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SchurFailure(str(exc)) from exc
    log_t = np.zeros_like(t)
    minus_one = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1e-13:
            c = 0.5 * (t[i, i] + t[i + 1, i + 1])
            s = 0.5 * (t[i + 1, i] - t[i, i + 1])
            angle = math.atan2(s, c)
            log_t[i, i + 1] = -angle
            log_t[i + 1, i] = angle
            i += 2
            continue
        if t[i, i] < 0:
            minus_one.append(i)
        elif abs(t[i, i] - 1.0) > 1e-8:
            raise SchurFailure(f"unexpected real eigenvalue {t[i, i]}")
        i += 1
    if len(minus_one) % 2:
        raise SchurFailure("odd number of -1 eigenvalues: not a rotation")
    for a, b in zip(minus_one[::2], minus_one[1::2]):
        log_t[a, b] = -math.pi
        log_t[b, a] = math.pi
    log_m = z @ log_t @ z.T
    return 0.5 * (log_m - log_m.T)


def so4_log(m: np.ndarray) -> np.ndarray:
    """Skew P with exp(-2*pi*P) = M (principal branch)."""
    return -rotation_log_blocks(m) / TWO_PI


@dataclass(frozen=True)
class ConnectionSpec:
    p1: np.ndarray
    p2: np.ndarray


def build_connection(
    cx: np.ndarray,
    cy: np.ndarray,
    bx: Optional[Sequence[float]] = None,
    by: Optional[Sequence[float]] = None,
) -> ConnectionSpec:
    tx = lift_so3_to_so4(cx)
    ty = lift_so3_to_so4(cy)
    if bx is not None:
        tx = b_tilde(bx) @ tx
    if by is not None:
        ty = b_tilde(by) @ ty
    return ConnectionSpec(so4_log(tx), so4_log(ty))


@dataclass(frozen=True)
class NormalPolygonalCurve:
    """Axis-aligned moves of signed length 2*pi*steps, starting at (0, 0)."""

    moves: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for axis, steps in self.moves:
            if axis not in ("x", "y") or not isinstance(steps, int) or steps == 0:
                raise ValueError(f"bad move ({axis!r}, {steps!r})")

    @classmethod
    def parse(cls, text: str) -> NormalPolygonalCurve:
        """``x+1,y+1,x-1,y-1``; an empty string is the constant curve."""
        moves = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            m = re.fullmatch(r"([xy])([+-]?\d+)", part)
            if not m:
                raise ValueError(f"bad curve move {part!r}")
            moves.append((m.group(1), int(m.group(2))))
        return cls(tuple(moves))

    def endpoint(self) -> tuple[float, float]:
        x = TWO_PI * sum(s for a, s in self.moves if a == "x")
        y = TWO_PI * sum(s for a, s in self.moves if a == "y")
        return x, y

    def __str__(self):
        return ",".join(f"{a}{s:+d}" for a, s in self.moves)


def transport(conn: ConnectionSpec, curve: NormalPolygonalCurve) -> np.ndarray:
    out = np.eye(4)
    for axis, steps in curve.moves:
        p = conn.p1 if axis == "x" else conn.p2
        out = out @ so4_exp(-TWO_PI * steps * p)
    return out


# Self-dual basis of Λ²R⁴ in Plücker coordinates, pairs ordered
# (12, 13, 14, 23, 24, 34).
_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_S = 1 / math.sqrt(2)
OMEGA = np.array(
    [
        [_S, 0, 0, 0, 0, _S],    # e1^e2 + e3^e4
        [0, _S, 0, 0, -_S, 0],   # e1^e3 + e4^e2
        [0, 0, _S, _S, 0, 0],    # e1^e4 + e2^e3
    ]
)


def wedge_square(m: np.ndarray) -> np.ndarray:
    """6x6 matrix of the induced map on Λ²R⁴ (2x2 minors of M)."""
    m = np.asarray(m, dtype=float)
    out = np.empty((6, 6))
    for col, (i, j) in enumerate(_PAIRS):
        for row, (k, l) in enumerate(_PAIRS):
            out[row, col] = m[k, i] * m[l, j] - m[l, i] * m[k, j]
    return out


def lambda_plus_action(m: np.ndarray) -> np.ndarray:
    """3x3 matrix R with (Λ²M) Ω_b = Σ_a R[a, b] Ω_a."""
    return OMEGA @ wedge_square(m) @ OMEGA.T


def holonomy_of_curve(conn: ConnectionSpec, curve: NormalPolygonalCurve) -> np.ndarray:
    return lambda_plus_action(transport(conn, curve))


def word_product(cx: np.ndarray, cy: np.ndarray, curve: NormalPolygonalCurve) -> np.ndarray:
    """The 3x3 word matching ``curve`` under the curve-order convention."""
    out = np.eye(3)
    for axis, steps in curve.moves:
        c = cx if axis == "x" else cy
        out = out @ np.linalg.matrix_power(c, steps)
    return out
