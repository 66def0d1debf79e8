import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import special_ortho_group

from twistor_holonomy.errors import NotUnit
from twistor_holonomy.holonomy import load_catalog
from twistor_holonomy.rotation import CosPhi, Triplet, build_pair, c_of_theta, is_rotation
from twistor_holonomy.scalar import Angle
from twistor_holonomy.transport import (
    ConnectionSpec,
    NormalPolygonalCurve,
    b_tilde,
    build_connection,
    holonomy_of_curve,
    is_so4,
    lambda_plus_action,
    lift_so3_to_so4,
    so4_exp,
    so4_log,
    transport,
    word_product,
)

F = Fraction
TWO_PI = 2 * math.pi


def random_so4(rng, n):
    return special_ortho_group.rvs(4, size=n, random_state=rng)


def block_skew(a, b):
    p = np.zeros((4, 4))
    p[1, 0], p[0, 1] = a, -a
    p[3, 2], p[2, 3] = b, -b
    return p


def block_rot(a, b):
    m = np.zeros((4, 4))
    m[:2, :2] = [[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]]
    m[2:, 2:] = [[math.cos(b), -math.sin(b)], [math.sin(b), math.cos(b)]]
    return m


def test_lift():
    assert np.array_equal(lift_so3_to_so4(np.eye(3)), np.eye(4))
    assert np.array_equal(lift_so3_to_so4(c_of_theta(Angle(1))), np.diag([1.0, 1, -1, -1]))
    m = lift_so3_to_so4(c_of_theta(Angle(F(2, 5))))
    assert is_so4(m)


def test_b_tilde():
    assert np.array_equal(b_tilde([1, 0, 0, 0]), np.eye(4))
    expected = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0.0]])
    assert np.array_equal(b_tilde([0, 1, 0, 0]), expected)
    rng = np.random.default_rng(0)
    for _ in range(50):
        b = rng.normal(size=4)
        b /= np.linalg.norm(b)
        m = b_tilde(b)
        assert np.max(np.abs(m.T @ m - np.eye(4))) < 1e-12
        assert abs(np.linalg.det(m) - 1) < 1e-12
    with pytest.raises(NotUnit):
        b_tilde([1, 1, 0, 0])


def test_log_examples():
    assert np.array_equal(so4_log(np.eye(4)), np.zeros((4, 4)))
    p = so4_log(lift_so3_to_so4(c_of_theta(Angle(F(1, 2)))))
    assert p[3, 2] == pytest.approx(-0.25, abs=1e-14)
    assert p[2, 3] == pytest.approx(0.25, abs=1e-14)
    assert np.max(np.abs(p[:2, :])) < 1e-15


def test_log_half_turns_choose_plus_pi():
    m = np.diag([1.0, 1.0, -1.0, -1.0])
    p = so4_log(m)
    assert np.max(np.abs(so4_exp(-TWO_PI * p) - m)) < 1e-12
    # angle +pi: -2*pi*P has the +pi block
    assert abs(abs(p[3, 2]) - 0.5) < 1e-14
    full = so4_log(-np.eye(4))
    assert np.max(np.abs(so4_exp(-TWO_PI * full) + np.eye(4))) < 1e-12


def test_log_round_trip():
    rng = np.random.default_rng(20240601)
    for m in random_so4(rng, 100):
        p = so4_log(m)
        assert np.max(np.abs(p + p.T)) < 1e-13
        assert np.max(np.abs(so4_exp(-TWO_PI * p) - m)) < 1e-10


def test_exp_examples():
    assert np.array_equal(so4_exp(np.zeros((4, 4))), np.eye(4))
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.normal(size=(4, 4))
        p = a - a.T
        assert np.max(np.abs(so4_exp(p) @ so4_exp(-p) - np.eye(4))) < 1e-12


def test_exp_block_closed_form():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = rng.uniform(-7, 7, size=2)
        assert np.max(np.abs(so4_exp(block_skew(a, b)) - block_rot(a, b))) < 1e-13
        # conjugated blocks: ||P|| up to 10
        q = special_ortho_group.rvs(4, random_state=rng)
        p = q @ block_skew(a, b) @ q.T
        assert np.max(np.abs(so4_exp(p) - q @ block_rot(a, b) @ q.T)) < 1e-12


def test_build_connection():
    conn = build_connection(np.eye(3), np.eye(3))
    assert not conn.p1.any() and not conn.p2.any()
    cx, cy = build_pair(Triplet.exact(F(1, 2), F(2, 3), CosPhi.sqrt_rational(F(2, 3))))
    conn = build_connection(cx, cy)
    assert np.max(np.abs(so4_exp(-TWO_PI * conn.p1) - lift_so3_to_so4(cx))) < 1e-10
    assert np.max(np.abs(so4_exp(-TWO_PI * conn.p2) - lift_so3_to_so4(cy))) < 1e-10
    b = [0, 1, 0, 0]
    conn = build_connection(cx, cy, bx=b)
    target = b_tilde(b) @ lift_so3_to_so4(cx)
    assert np.max(np.abs(so4_exp(-TWO_PI * conn.p1) - target)) < 1e-10


def test_curve_parse():
    c = NormalPolygonalCurve.parse("x+1,y+1,x-1,y-1")
    assert c.moves == (("x", 1), ("y", 1), ("x", -1), ("y", -1))
    assert str(c) == "x+1,y+1,x-1,y-1"
    assert c.endpoint() == (0.0, 0.0)
    assert NormalPolygonalCurve.parse("").moves == ()
    assert NormalPolygonalCurve.parse("x2").moves == (("x", 2),)
    for bad in ("z+1", "x+0", "x+1.5", "x+"):
        with pytest.raises(ValueError):
            NormalPolygonalCurve.parse(bad)


def test_transport_products():
    rng = np.random.default_rng(3)
    m1, m2 = random_so4(rng, 2)
    conn = ConnectionSpec(so4_log(m1), so4_log(m2))
    assert np.array_equal(transport(conn, NormalPolygonalCurve()), np.eye(4))
    one = transport(conn, NormalPolygonalCurve.parse("x+1"))
    assert np.max(np.abs(one - so4_exp(-TWO_PI * conn.p1))) < 1e-14
    loop = transport(conn, NormalPolygonalCurve.parse("x+1,y+1,x-1,y-1"))
    e = so4_exp
    expected = e(-TWO_PI * conn.p1) @ e(-TWO_PI * conn.p2) @ e(TWO_PI * conn.p1) @ e(TWO_PI * conn.p2)
    assert np.max(np.abs(loop - expected)) < 1e-12
    assert is_so4(loop)


def test_lambda_plus_examples():
    assert np.allclose(lambda_plus_action(np.eye(4)), np.eye(3), atol=1e-15)
    for q in (F(1, 2), F(1), F(2, 5), F(1, 3)):
        c = c_of_theta(Angle(q))
        assert np.max(np.abs(lambda_plus_action(lift_so3_to_so4(c)) - c)) < 1e-14
    r = lambda_plus_action(b_tilde([0, 1, 0, 0]))
    assert is_rotation(r)


def test_lambda_plus_lifts_arbitrary_rotations():
    rng = np.random.default_rng(4)
    for c in special_ortho_group.rvs(3, size=30, random_state=rng):
        assert np.max(np.abs(lambda_plus_action(lift_so3_to_so4(c)) - c)) < 1e-12


def test_lambda_plus_functorial_and_proper():
    rng = np.random.default_rng(5)
    ms = random_so4(rng, 100)
    for m, n in zip(ms[::2], ms[1::2]):
        lhs = lambda_plus_action(m @ n)
        rhs = lambda_plus_action(m) @ lambda_plus_action(n)
        assert np.max(np.abs(lhs - rhs)) < 1e-10
        assert is_rotation(lhs, tol=1e-11)
        assert np.linalg.det(lhs) > 0


def _catalog_pairs(n=10):
    entries = load_catalog()
    step = max(1, len(entries) // n)
    return [build_pair(e.triplet) for e in entries[::step]][:n]


@pytest.mark.parametrize("twist", [None, "x", "y"])
def test_unit_loops_reproduce_periods(twist):
    rng = np.random.default_rng(6)
    b = rng.normal(size=4)
    b /= np.linalg.norm(b)
    for cx, cy in _catalog_pairs():
        conn = build_connection(cx, cy, bx=b if twist == "x" else None, by=b if twist == "y" else None)
        hx = holonomy_of_curve(conn, NormalPolygonalCurve.parse("x+1"))
        hy = holonomy_of_curve(conn, NormalPolygonalCurve.parse("y+1"))
        assert np.max(np.abs(hx - cx)) < 1e-9
        assert np.max(np.abs(hy - cy)) < 1e-9


def test_words_match_holonomy():
    cx, cy = build_pair(Triplet.exact(F(1, 2), F(2, 5), CosPhi.zero()))
    conn = build_connection(cx, cy)
    assert np.allclose(holonomy_of_curve(conn, NormalPolygonalCurve()), np.eye(3), atol=1e-15)
    for text in ("x+1,y+1,x-1,y-1", "y+2,x-3,y+1", "x+5", "y-1,x+1,y+1,x-1,y+3"):
        curve = NormalPolygonalCurve.parse(text)
        assert np.max(np.abs(holonomy_of_curve(conn, curve) - word_product(cx, cy, curve))) < 1e-9


def test_other_log_branch_same_holonomy():
    cx, cy = build_pair(Triplet.exact(F(1, 2), F(2, 3), CosPhi.sqrt_rational(F(2, 3))))
    conn = build_connection(cx, cy)
    # shift P1 by a full turn in the plane of its own rotation: exp(-2πP1) unchanged
    w, v = np.linalg.eig(conn.p1)
    k = int(np.argmax(np.abs(w.imag)))
    u = np.real(v[:, k]) / np.linalg.norm(np.real(v[:, k]))
    x = np.imag(v[:, k]) / np.linalg.norm(np.imag(v[:, k]))
    j = np.outer(x, u) - np.outer(u, x)
    alt = ConnectionSpec(conn.p1 + j, conn.p2)
    assert np.max(np.abs(so4_exp(-TWO_PI * alt.p1) - so4_exp(-TWO_PI * conn.p1))) < 1e-10
    curve = NormalPolygonalCurve.parse("x+1,y+2,x-3")
    assert np.max(np.abs(holonomy_of_curve(alt, curve) - holonomy_of_curve(conn, curve))) < 1e-9
