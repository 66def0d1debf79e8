import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistor_holonomy.errors import DegenerateAxis, ExcludedCase
from twistor_holonomy.holonomy import load_catalog
from twistor_holonomy.rotation import (
    P1,
    CosPhi,
    Triplet,
    axis_angle,
    build_pair,
    c_of_theta,
    check_prop42,
    check_prop43,
    is_rotation,
    trace_product_exact,
    trace_product_numeric,
    u_of_phi,
    vocabulary,
)
from twistor_holonomy.scalar import ONE, RHO, SQRT2, SQRT5, Angle, mq_to_float

F = Fraction


def exact(qx, qy, phi):
    return Triplet.exact(F(qx), F(qy), CosPhi.parse(phi))


def test_c_of_theta():
    assert np.array_equal(c_of_theta(Angle(0)), np.eye(3))
    assert np.array_equal(c_of_theta(Angle(1)), np.diag([1.0, -1.0, -1.0]))
    assert np.array_equal(c_of_theta(Angle(F(1, 2))), np.array([[1, 0, 0], [0, 0, -1], [0, 1, 0.0]]))


def test_u_of_phi():
    assert np.array_equal(u_of_phi(CosPhi.zero()), np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 1.0]]))
    u = u_of_phi(CosPhi.sqrt_rational(F(1, 2)))
    assert u[0, 0] == pytest.approx(math.sqrt(2) / 2, abs=1e-16)
    assert u[0, 1] == pytest.approx(math.sqrt(2) / 2, abs=1e-16)
    u = u_of_phi(CosPhi.sqrt_rational(F(1, 3)))
    assert float(P1 @ (u @ P1)) == pytest.approx(math.sqrt(1 / 3), abs=1e-15)


def test_build_pair_half_turns():
    cx, cy = build_pair(exact(1, 1, "0"))
    assert np.allclose(cx, np.diag([1, -1, -1]), atol=1e-15)
    assert np.allclose(cy, np.diag([-1, 1, -1]), atol=1e-15)


def test_build_pair_axis_of_cy():
    t = exact(F(1, 2), F(2, 3), "sqrt(2/3)")
    cx, cy = build_pair(t)
    axis, angle = axis_angle(cy)
    up = u_of_phi(t.phi) @ P1
    assert np.linalg.norm(np.cross(axis, up)) < 1e-12
    assert angle == pytest.approx(2 * math.pi / 3, abs=1e-12)


def test_trace_examples():
    assert trace_product_exact(exact(1, F(1, 3), "sqrt(1/3)")) == -ONE * 2 / 3
    assert trace_product_exact(exact(F(1, 2), F(2, 3), "phi23")) == -RHO / 2
    assert trace_product_exact(exact(F(1, 2), F(2, 5), "0")) == (SQRT5 - 1) / 4
    t = exact(F(1, 2), F(2, 3), "sqrt(2/3)")
    assert trace_product_exact(t) == ONE / 2 - SQRT2
    assert trace_product_numeric(t) == pytest.approx(-0.914213562373095, abs=1e-12)


def test_trace_identity_pair():
    t = Triplet.exact(0, 0, CosPhi.sqrt_rational(F(1, 3)))
    assert trace_product_exact(t) == 3 * ONE


def test_trace_numeric_examples():
    assert trace_product_numeric(exact(1, 1, "0")) == pytest.approx(-1.0, abs=1e-15)
    assert math.isfinite(trace_product_numeric(Triplet.numeric(1.0, 1.0, CosPhi.zero())))


def _catalog_triplets():
    return [e.triplet for e in load_catalog()]


def test_exact_matches_numeric_and_matrix_on_catalog():
    for t in _catalog_triplets():
        if not t.in_exact_domain:
            continue
        cx, cy = build_pair(t)
        exact_value = mq_to_float(trace_product_exact(t))
        assert abs(exact_value - trace_product_numeric(t)) < 1e-12
        assert abs(exact_value - np.trace(cx @ cy)) < 1e-12


def test_pairs_are_rotations():
    for t in _catalog_triplets():
        cx, cy = build_pair(t)
        assert is_rotation(cx) and is_rotation(cy)
        assert is_rotation(cx @ cy, tol=1e-11)


def test_vocabulary():
    vocab = vocabulary()
    assert len({str(c) for c in vocab}) == 12
    for c in vocab:
        assert abs(mq_to_float(c.cos_sq) - c.cos_float ** 2) < 1e-14
        assert 0 <= c.cos_float < 1


def test_named_constants():
    assert CosPhi.named("phi23").cos_sq == RHO ** 2 / 3
    assert CosPhi.named("phi25_1").cos_sq == RHO * SQRT5 / 5
    assert CosPhi.named("phi25_2").cos_sq == RHO ** -1 * SQRT5 / 5
    assert CosPhi.named("phi33").cos_sq == ONE * 5 / 9
    assert CosPhi.named("phi35_1").cos_sq == RHO ** 3 * SQRT5 / 15
    assert CosPhi.named("phi35_2").cos_sq == RHO ** -3 * SQRT5 / 15
    assert CosPhi.named("phi55").cos_sq == ONE / 5


def test_cos_phi_range():
    with pytest.raises(ValueError):
        CosPhi.parse("1")
    with pytest.raises(ValueError):
        CosPhi.parse("-0.2")


def test_axis_angle():
    for q in (F(1, 5), F(1, 2), F(2, 3), 1):
        axis, angle = axis_angle(c_of_theta(Angle(q)))
        assert np.array_equal(axis, P1)
        assert angle == pytest.approx(math.pi * q, abs=1e-12)
    axis, angle = axis_angle(np.eye(3))
    assert np.array_equal(axis, P1) and angle == 0.0
    with pytest.raises(DegenerateAxis):
        axis_angle(np.eye(3), strict=True)


def test_prop42_prop43_examples():
    pair = build_pair(exact(F(1, 2), F(2, 3), "sqrt(2/3)"))
    assert check_prop42(pair) and check_prop43(pair)
    assert check_prop42(build_pair(exact(F(1, 2), F(2, 3), "phi23")))
    assert check_prop43(build_pair(exact(F(1, 2), F(2, 5), "0")))
    with pytest.raises(ExcludedCase):
        check_prop43(build_pair(exact(1, 1, "0")))


def test_prop43_oracle():
    cx, cy = build_pair(exact(F(1, 2), F(2, 5), "0"))
    a1, _ = axis_angle(cx @ cy)
    a2, _ = axis_angle(cy @ cx)
    assert np.linalg.norm(np.cross(a1, a2)) > 1e-8


angles = st.floats(min_value=1e-3, max_value=2 * math.pi - 1e-3)
cosines = st.floats(min_value=0.0, max_value=0.999)


@settings(max_examples=100, deadline=None)
@given(angles, angles, cosines)
def test_numeric_trace_property(tx, ty, c):
    t = Triplet.numeric(tx, ty, CosPhi.numeric(c))
    cx, cy = build_pair(t)
    assert is_rotation(cx) and is_rotation(cy)
    assert abs(trace_product_numeric(t) - np.trace(cx @ cy)) < 1e-12
    assert check_prop42((cx, cy))


def test_numeric_domain():
    with pytest.raises(ValueError):
        Triplet.numeric(0.0, 1.0, CosPhi.zero())
    with pytest.raises(ValueError):
        Triplet.numeric(1.0, 2 * math.pi, CosPhi.zero())


def test_exact_domain_flag():
    assert exact(1, F(1, 2), "0").in_exact_domain
    assert not Triplet.exact(F(4, 3), 1, CosPhi.zero()).in_exact_domain
    with pytest.raises(ValueError):
        trace_product_exact(Triplet.exact(F(4, 3), 1, CosPhi.zero()))
