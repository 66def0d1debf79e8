from fractions import Fraction

import numpy as np
import pytest

from twistor_holonomy.holonomy import (
    GroupLabel,
    catalog_verify,
    check_remark75,
    classify_finite,
    close_group,
    close_triplet,
    halved_triplets,
    load_catalog,
    orbit,
)
from twistor_holonomy.poly import Complexity, complexity_verdict
from twistor_holonomy.rotation import P1, P2, P3, CosPhi, Triplet, build_pair, c_of_theta
from twistor_holonomy.scalar import Angle

F = Fraction


def exact(qx, qy, phi):
    return Triplet.exact(F(qx), F(qy), CosPhi.parse(phi))


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


@pytest.fixture(scope="module")
def closures(catalog):
    return [(e, close_triplet(e.triplet)) for e in catalog]


def test_cyclic_closure():
    g = close_group([c_of_theta(Angle(F(2, 3)))])
    assert g.status == "Complete(3)"
    assert classify_finite(g) == GroupLabel("Cyclic", 3)


def test_trivial():
    g = close_group([np.eye(3)])
    assert g.status == "Complete(1)"
    assert str(classify_finite(g)) == "Trivial"


def test_a4_closure():
    g = close_triplet(exact(1, F(2, 3), "sqrt(1/3)"))
    assert g.status == "Complete(12)"
    assert classify_finite(g) == GroupLabel("A4")


def test_infinite_closure_hits_cap():
    g = close_triplet(exact(F(1, 2), F(2, 3), "sqrt(2/3)"))
    assert not g.complete
    assert g.status == "CapExceeded(10000)"
    assert g.order <= 10000


def test_dihedral_and_a5():
    assert classify_finite(close_triplet(exact(1, F(2, 3), "0"))) == GroupLabel("Dihedral", 3)
    assert classify_finite(close_triplet(exact(1, F(2, 5), "phi25_1"))) == GroupLabel("A5")


def test_words_reproduce_elements():
    cx, cy = build_pair(exact(1, F(2, 3), "sqrt(1/3)"))
    g = close_group([cx, cy])
    mats = {"x": cx, "y": cy}
    for m, w in zip(g.elements, g.words):
        prod = np.eye(3)
        for ch in w:
            prod = prod @ mats[ch]
        assert np.allclose(prod, m, atol=1e-12)


def test_named_catalog_entries(catalog):
    by_source = {}
    for e in catalog:
        by_source.setdefault(e.source, []).append(e)
    assert all(e.label == GroupLabel("S4") and e.order == 24 for e in by_source["thm3.3(a-2)"])
    t = exact(1, F(1, 2), "sqrt(1/2)")
    assert t in [e.triplet for e in by_source["thm3.3(a-2)"]]
    assert all(e.label == GroupLabel("A5") for e in by_source["thm3.4(c-3)"])
    g = close_triplet(exact(F(2, 5), F(2, 5), "phi55"))
    assert g.order == 60 and classify_finite(g) == GroupLabel("A5")


def test_catalog_verify():
    report = catalog_verify()
    assert report.failures == 0
    assert len(report.results) == len(load_catalog())


def test_closure_idempotent(closures):
    for e, g in closures[::7]:
        again = close_group(list(g.elements))
        assert again.order == g.order


def test_orbit_divides_order(closures):
    rng = np.random.default_rng(3)
    for e, g in closures:
        pts = [P1, P2, P3] + list(rng.normal(size=(20, 3)))
        for p in pts:
            p = np.asarray(p) / np.linalg.norm(p)
            orb = orbit(g, p)
            assert g.order % len(orb) == 0
            assert len(orb) <= g.order
            assert np.allclose(np.linalg.norm(orb.points, axis=1), 1.0, atol=1e-10)


def test_dedup_stability(closures):
    for e, g in closures[::5]:
        for tol in (1e-8, 1e-10):
            assert close_triplet(e.triplet, tol=tol).order == g.order


def test_orbit_examples():
    g = close_triplet(exact(1, F(2, 3), "sqrt(1/3)"))
    generic = np.array([0.3, 0.5, 0.8])
    assert len(orbit(g, generic / np.linalg.norm(generic))) == 12
    h = close_group([c_of_theta(Angle(F(2, 5)))])
    assert len(orbit(h, P1)) == 1


def test_prop23_orbit():
    g = close_triplet(exact(F(1, 2), 1, "0"))
    pts = orbit(g, P1).points
    got = {tuple(np.rint(p * 1e9).astype(int)) for p in pts}
    assert got == {(10**9, 0, 0), (-(10**9), 0, 0)}


def test_halving_dichotomy_sample():
    for h in halved_triplets()[::10]:
        v = complexity_verdict(h.triplet)
        g = close_triplet(h.triplet)
        assert (v.kind is Complexity.FINITE_CANDIDATE) == g.complete


def test_remark75():
    assert check_remark75(exact(F(1, 2), F(2, 3), "sqrt(2/3)"))
    assert not check_remark75(exact(1, 1, "0"))
    assert not check_remark75(exact(1, F(2, 3), "sqrt(1/3)"))


def test_group_label_parse():
    assert GroupLabel.parse("Dihedral(5)") == GroupLabel("Dihedral", 5)
    assert GroupLabel.parse("A4") == GroupLabel("A4")
    assert str(GroupLabel("Cyclic", 3)) == "Cyclic(3)"
    with pytest.raises(ValueError):
        GroupLabel.parse("")
