"""Regeneration of the trace / minimal-polynomial case tables.

Each golden row lists one or more halved triplets that share a trace.  For
every triplet the exact trace, the characteristic coefficient a = 1 - tr,
and f_zeta are recomputed and compared by exact field equality.  The
irrationality lists (quadratic a values, quartic (a, b) pairs) are then
rebuilt from the NotRootOfUnity verdicts of the regenerated polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ._data import parse_table, read_text
from .errors import HolonomyError
from .poly import RationalPoly, char_poly, format_poly, is_cyclotomic, minimal_poly_zeta
from .rotation import CosPhi, Triplet, trace_product_exact
from .scalar import parse_scalar

GOLDEN = "lemma_cases.tsv"
LISTS = "lemma6_lists.tsv"


@dataclass(frozen=True)
class CaseRow:
    case: str
    triplets: tuple[Triplet, ...]
    trace: object            # MQ
    chi_a: object            # MQ
    f_zeta: RationalPoly
    degree: int


def _parse_triplet(text: str) -> Triplet:
    tx, ty, cphi = (s.strip() for s in text.split(","))
    return Triplet.exact(Fraction(tx), Fraction(ty), CosPhi.parse(cphi))


def parse_golden(text: str) -> list[CaseRow]:
    rows = []
    for lineno, cols in enumerate(parse_table(text), 1):
        if len(cols) != 6:
            raise ValueError(f"golden row {lineno}: expected 6 columns, got {len(cols)}")
        case, trips, tr, a, f, deg = cols
        rows.append(
            CaseRow(
                case=case,
                triplets=tuple(_parse_triplet(s) for s in trips.split(";")),
                trace=parse_scalar(tr),
                chi_a=parse_scalar(a),
                f_zeta=RationalPoly.from_high([Fraction(c) for c in f.split(",")]),
                degree=int(deg),
            )
        )
    return rows


def load_golden(path: Optional[str | Path] = None) -> list[CaseRow]:
    text = Path(path).read_text(encoding="utf-8") if path else read_text(GOLDEN)
    return parse_golden(text)


@dataclass
class RowCheck:
    case: str
    triplet: Triplet
    trace: object
    f_zeta: Optional[RationalPoly]
    diffs: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diffs


def regenerate_row(row: CaseRow) -> list[RowCheck]:
    out = []
    for t in row.triplets:
        check = RowCheck(row.case, t, None, None)
        try:
            tr = trace_product_exact(t)
            check.trace = tr
            f = minimal_poly_zeta(tr)
            check.f_zeta = f
        except (HolonomyError, ValueError) as exc:
            check.diffs.append(f"error: {exc}")
            out.append(check)
            continue
        if tr != row.trace:
            check.diffs.append(f"trace {tr} != golden {row.trace}")
        if char_poly(tr).a != row.chi_a:
            check.diffs.append(f"chi a {char_poly(tr).a} != golden {row.chi_a}")
        if f != row.f_zeta:
            check.diffs.append(f"f_zeta {f} != golden {row.f_zeta}")
        if f.degree != row.degree:
            check.diffs.append(f"degree {f.degree} != golden {row.degree}")
        out.append(check)
    return out


@dataclass
class IrrationalityLists:
    quadratic: list[Fraction]                       # a in λ^2 + aλ + 1
    quartic: list[tuple[Fraction, Fraction]]        # (a, b) in λ^4 + aλ^3 + bλ^2 + aλ + 1
    roots_of_unity: dict[str, int]                  # polynomial -> order

    def to_dict(self) -> dict:
        return {
            "quadratic": [str(a) for a in self.quadratic],
            "quartic": [[str(a), str(b)] for a, b in self.quartic],
            "roots_of_unity": dict(self.roots_of_unity),
        }


def derive_lists(polys) -> IrrationalityLists:
    """Split palindromic f_zeta by cyclotomic verdict, first-seen order."""
    quad, quart, unity = [], [], {}
    for f in polys:
        v = is_cyclotomic(f)
        if v.is_root_of_unity:
            unity.setdefault(format_poly(f.high_first()), v.order)
            continue
        c = f.high_first()
        if f.degree == 2 and c[1] not in quad:
            quad.append(c[1])
        elif f.degree == 4 and (c[1], c[2]) not in quart:
            quart.append((c[1], c[2]))
    return IrrationalityLists(quad, quart, unity)


def load_published_lists(path: Optional[str | Path] = None) -> IrrationalityLists:
    text = Path(path).read_text(encoding="utf-8") if path else read_text(LISTS)
    quad, quart = [], []
    for kind, value in parse_table(text):
        if kind == "quadratic":
            quad.append(Fraction(value))
        elif kind == "quartic":
            a, b = value.split(",")
            quart.append((Fraction(a), Fraction(b)))
        else:
            raise ValueError(f"unknown list kind {kind!r}")
    return IrrationalityLists(quad, quart, {})


@dataclass
class TablesReport:
    rows: int
    checks: list[RowCheck]
    derived: IrrationalityLists
    published: IrrationalityLists
    distinct_labels: int

    @property
    def row_diffs(self) -> list[RowCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def list_diffs(self) -> list[str]:
        out = []
        if set(self.derived.quadratic) != set(self.published.quadratic):
            out.append(
                f"quadratic list {sorted(self.derived.quadratic)} != published {sorted(self.published.quadratic)}"
            )
        if set(self.derived.quartic) != set(self.published.quartic):
            out.append(
                f"quartic list {sorted(self.derived.quartic)} != published {sorted(self.published.quartic)}"
            )
        return out

    @property
    def ok(self) -> bool:
        return not self.row_diffs and not self.list_diffs and self.rows == self.distinct_labels

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "triplets_checked": len(self.checks),
            "row_diffs": [
                {"case": c.case, "triplet": str(c.triplet), "diffs": c.diffs} for c in self.row_diffs
            ],
            "cases": [
                {
                    "case": c.case,
                    "triplet": str(c.triplet),
                    "trace": str(c.trace),
                    "f_zeta": str(c.f_zeta),
                    "degree": c.f_zeta.degree if c.f_zeta is not None else None,
                }
                for c in self.checks
            ],
            "derived_lists": self.derived.to_dict(),
            "list_diffs": self.list_diffs,
            "ok": self.ok,
        }


def regenerate_tables(golden: Optional[str | Path] = None, lists: Optional[str | Path] = None) -> TablesReport:
    rows = load_golden(golden)
    checks = [c for row in rows for c in regenerate_row(row)]
    derived = derive_lists(c.f_zeta for c in checks if c.f_zeta is not None)
    return TablesReport(
        rows=len(rows),
        checks=checks,
        derived=derived,
        published=load_published_lists(lists),
        distinct_labels=len({r.case for r in rows}),
    )
