"""Group closure, finite-group classification and orbit sets on S^2."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._data import read_table
from .errors import ExcludedCase, UnrecognizedGroup
from .poly import Complexity, complexity_verdict
from .rotation import CosPhi, Triplet, axis_angle, build_pair, check_prop43

DEFAULT_CAP = 10000
DEFAULT_TOL = 1e-9
MAX_WORD_LENGTH = 30


def _digits(tol: float) -> int:
    return max(0, math.ceil(-math.log10(tol)))


def _keys(mats: np.ndarray, digits: int) -> list[bytes]:
    # rint on a scaled copy maps -0.0 and +0.0 to the same integer
    q = np.rint(mats.reshape(len(mats), -1) * 10.0 ** digits).astype(np.int64)
    return [row.tobytes() for row in q]


@dataclass
class GroupClosure:
    elements: np.ndarray              # (N, 3, 3)
    words: list[str]                  # shortest generator word per element
    complete: bool
    cap: int
    generator_names: str = "xy"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def status(self) -> str:
        return f"Complete({self.order})" if self.complete else f"CapExceeded({self.cap})"


def close_group(
    generators: Sequence[np.ndarray],
    cap: int = DEFAULT_CAP,
    tol: float = DEFAULT_TOL,
    max_word_length: int = MAX_WORD_LENGTH,
    names: Optional[str] = None,
) -> GroupClosure:
    """Breadth-first closure of <generators> under left multiplication.

    Elements are deduplicated by rounding entries to ceil(-log10 tol) digits.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = [np.asarray(g, dtype=float) for g in generators]
    if names is None:
        names = "xyzw"[: len(gens)] if len(gens) <= 4 else "".join(chr(97 + i) for i in range(len(gens)))
    digits = _digits(tol)
    ident = np.eye(3)[None]
    seen = dict.fromkeys(_keys(ident, digits))
    elements = [np.eye(3)]
    words = [""]
    frontier = ident
    frontier_words = [""]
    length = 0
    while len(frontier):
        if length >= max_word_length:
            return GroupClosure(np.array(elements), words, False, cap, names)
        length += 1
        new_mats, new_words = [], []
        for g, name in zip(gens, names):
            prods = np.einsum("ij,njk->nik", g, frontier)
            for k, key in enumerate(_keys(prods, digits)):
                if key in seen:
                    continue
                if len(elements) >= cap:
                    return GroupClosure(np.array(elements), words, False, cap, names)
                seen[key] = None
                elements.append(prods[k])
                words.append(name + frontier_words[k])
                new_mats.append(prods[k])
                new_words.append(name + frontier_words[k])
        frontier = np.array(new_mats).reshape(-1, 3, 3)
        frontier_words = new_words
    return GroupClosure(np.array(elements), words, True, cap, names)


def close_triplet(t: Triplet, cap: int = DEFAULT_CAP, tol: float = DEFAULT_TOL) -> GroupClosure:
    return close_group(list(build_pair(t)), cap=cap, tol=tol)


# -- classification ----------------------------------------------------

class GroupLabel(NamedTuple):
    kind: str            # Trivial, Cyclic, Dihedral, A4, S4, A5
    n: Optional[int] = None

    def __str__(self):
        return f"{self.kind}({self.n})" if self.n is not None else self.kind

    @classmethod
    def parse(cls, text: str) -> GroupLabel:
        m = re.fullmatch(r"\s*(\w+?)(?:\((\d+)\))?\s*", text)
        if not m:
            raise ValueError(f"bad group label {text!r}")
        kind, n = m.group(1), m.group(2)
        return cls(kind, int(n) if n else None)


_POLYHEDRAL = {
    (12, ((1, 1), (2, 3), (3, 8))): GroupLabel("A4"),
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): GroupLabel("S4"),
    (60, ((1, 1), (2, 15), (3, 20), (5, 24))): GroupLabel("A5"),
}


def element_order(r: np.ndarray, max_order: int, tol: float = 1e-6) -> int:
    _, angle = axis_angle(r)
    turns = angle / (2 * math.pi)
    for n in range(1, max_order + 1):
        if abs(n * turns - round(n * turns)) < tol:
            return n
    raise UnrecognizedGroup(f"rotation by {angle} has order > {max_order}")


def _same_axis(u: np.ndarray, v: np.ndarray) -> bool:
    return float(np.linalg.norm(np.cross(u, v))) < 1e-6


def classify_finite(g: GroupClosure) -> GroupLabel:
    if not g.complete:
        raise ValueError("classification needs a complete closure")
    n = g.order
    if n == 1:
        return GroupLabel("Trivial")
    orders = [element_order(m, n) for m in g.elements]
    nontrivial = [(o, axis_angle(m)[0]) for m, o in zip(g.elements, orders) if o > 1]
    axes = [a for _, a in nontrivial]
    if all(_same_axis(axes[0], a) for a in axes):
        return GroupLabel("Cyclic", n)
    multiset = tuple(sorted(Counter(orders).items()))
    if (n, multiset) in _POLYHEDRAL:
        return _POLYHEDRAL[(n, multiset)]
    if n % 2 == 0:
        half = n // 2
        # index-2 rotation subgroup about one axis; everything else a half turn
        for a in axes:
            off_axis = [o for o, ax in nontrivial if not _same_axis(a, ax)]
            if len(off_axis) == half and all(o == 2 for o in off_axis):
                return GroupLabel("Dihedral", half)
    raise UnrecognizedGroup(f"order {n} with element orders {dict(multiset)}")


# -- orbits ------------------------------------------------------------

@dataclass
class OrbitSet:
    points: np.ndarray     # (M, 3)
    source: str = ""

    def __len__(self):
        return len(self.points)


def dedup_points(points: np.ndarray, digits: int = 9) -> np.ndarray:
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    q = np.rint(points * 10.0 ** digits).astype(np.int64)
    _, idx = np.unique(q, axis=0, return_index=True)
    return points[np.sort(idx)]


def orbit(g: GroupClosure, p, source: str = "") -> OrbitSet:
    if not g.complete:
        raise ValueError("orbit needs a complete closure")
    p = np.asarray(p, dtype=float)
    pts = np.einsum("nij,j->ni", g.elements, p)
    return OrbitSet(dedup_points(pts), source or f"point {p.tolist()}")


# -- catalog -----------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    source: str
    triplet: Triplet
    label: GroupLabel
    order: int


def load_catalog() -> list[CatalogEntry]:
    out = []
    for source, tx, ty, cphi, label, order in read_table("catalog.tsv"):
        t = Triplet.exact(Fraction(tx), Fraction(ty), CosPhi.parse(cphi))
        out.append(CatalogEntry(source, t, GroupLabel.parse(label), int(order)))
    return out


@dataclass
class CatalogResult:
    entry: CatalogEntry
    status: str
    label: Optional[GroupLabel]
    passed: bool


@dataclass
class CatalogReport:
    results: list[CatalogResult] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(not r.passed for r in self.results)


def catalog_verify(cap: int = DEFAULT_CAP, tol: float = DEFAULT_TOL) -> CatalogReport:
    report = CatalogReport()
    for entry in load_catalog():
        g = close_triplet(entry.triplet, cap=cap, tol=tol)
        label = None
        if g.complete:
            try:
                label = classify_finite(g)
            except UnrecognizedGroup:
                label = None
        ok = g.complete and g.order == entry.order and label == entry.label
        report.results.append(CatalogResult(entry, g.status, label, ok))
    return report


@dataclass(frozen=True)
class HalvedTriplet:
    triplet: Triplet
    sources: tuple[str, ...]


def halved_triplets() -> list[HalvedTriplet]:
    """Halvings of the dihedral and polyhedral catalog triplets.

    Only (theta'_x, theta'_y) in (0, pi]^2 are kept.
    """
    found: dict[Triplet, list[str]] = {}
    for entry in load_catalog():
        if entry.label.kind == "Cyclic":
            continue
        for h in entry.triplet.halvings():
            if h.in_exact_domain:
                found.setdefault(h, []).append(f"{entry.source} {entry.triplet}")
    return [HalvedTriplet(t, tuple(src)) for t, src in found.items()]


def check_remark75(t: Triplet) -> bool:
    """Conditions (A), (B), (C) for C1 = C'_x C'_y and C2 = C'_y C'_x."""
    cx, cy = build_pair(t)
    c1, c2 = cx @ cy, cy @ cx
    eye = np.eye(3)
    if np.allclose(c1 @ c1, eye, atol=1e-9) or np.allclose(c2 @ c2, eye, atol=1e-9):
        return False
    try:
        if not check_prop43((cx, cy)):
            return False
    except ExcludedCase:
        return False
    if not t.in_exact_domain:
        return False
    return complexity_verdict(t).kind is Complexity.INFINITE_CERTIFIED
