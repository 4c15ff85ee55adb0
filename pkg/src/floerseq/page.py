"""E1-page assembly and its structural checks.

Columns are keyed by period. Column 0 is H*(Y) split by fixed component;
a column at a non-integer period k/m holds one entry per Z/m family, the
slice cohomology moved up so that its bottom class sits at the slice
grading; a column at an integer N holds the whole slice at infinity moved
down by 2N times the Maslov index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .errors import HypothesisNotMet
from .graded import (GradedRanks, family_slice_betti, graded_sum, reflect, shift_down,
                     slice_cohomology)
from .index import (compatibly_weighted, format_period, integer_slice_grading, maslov_index,
                    outer_periods, slice_grading)
from .model import Diagnostic, ManifoldSpec, morse_bott_shift, total_cohomology

SIGMA = "Sigma"


@dataclass(frozen=True)
class Entry:
    source_id: str
    ranks: GradedRanks
    vertical: str = "rigid"


@dataclass(frozen=True)
class Column:
    period: Fraction
    entries: tuple[Entry, ...]

    @property
    def ranks(self) -> GradedRanks:
        return graded_sum(e.ranks for e in self.entries)

    def __getitem__(self, degree: int) -> int:
        return sum(e.ranks[degree] for e in self.entries)


@dataclass(frozen=True)
class E1Page:
    spec_name: str
    lam_max: Fraction
    maslov: int
    columns: tuple[Column, ...] = field(default_factory=tuple)

    @property
    def periods(self) -> list[Fraction]:
        return [c.period for c in self.columns]

    def column(self, period) -> Column | None:
        period = Fraction(period)
        for c in self.columns:
            if c.period == period:
                return c
        return None

    def rank(self, period, degree: int) -> int:
        c = self.column(period)
        return c[degree] if c is not None else 0

    def degrees(self) -> list[int]:
        return sorted({d for c in self.columns for d in c.ranks.degrees()})


def default_vertical(slice_betti: GradedRanks) -> str:
    """Circles and slices with a gap of two or more degrees admit no vertical differentials."""
    if slice_betti == GradedRanks.of({0: 1, 1: 1}):
        return "rigid"
    degs = slice_betti.degrees()
    if any(b - a >= 2 for a, b in zip(degs, degs[1:])):
        return "rigid"
    return "flexible"


def sigma_betti(spec: ManifoldSpec) -> GradedRanks:
    """Cohomology ranks of the slice at infinity."""
    if spec.slice_betti is not None:
        return spec.slice_betti
    return slice_cohomology(total_cohomology(spec), spec.dim, spec.intersection_form)


def zero_column(spec: ManifoldSpec) -> Column:
    return Column(Fraction(0), tuple(
        Entry(c.id, shift_down(c.betti, -morse_bott_shift(c))) for c in spec.components))


def column_at(spec: ManifoldSpec, T) -> Column:
    T = Fraction(T)
    if T.denominator == 1:
        sb = sigma_betti(spec)
        return Column(T, (Entry(SIGMA, shift_down(sb, -integer_slice_grading(spec, T.numerator)),
                                default_vertical(sb)),))
    entries = []
    for f in spec.families:
        if f.m != T.denominator:
            continue
        sb = family_slice_betti(spec, f)
        policy = f.vertical_policy or default_vertical(sb)
        entries.append(Entry(f"Z/{f.m}:{f.id}", shift_down(sb, -slice_grading(spec, f, T)), policy))
    return Column(T, tuple(entries))


def assemble_e1(spec: ManifoldSpec, lam_max, include_zero_column: bool = True) -> E1Page:
    lam_max = Fraction(lam_max)
    cols = [zero_column(spec)] if include_zero_column else []
    cols.extend(column_at(spec, T) for T in outer_periods(spec, lam_max))
    return E1Page(spec.name, lam_max, maslov_index(spec), tuple(cols))


def extend_by_periodicity(page: E1Page, up_to) -> E1Page:
    """Fill in columns beyond period 1 by shifting those in (0, 1] down by 2N*mu."""
    up_to = Fraction(up_to)
    base = [c for c in page.columns if 0 < c.period <= 1]
    known = {c.period: c for c in page.columns}
    for c in base:
        N = 1
        while c.period + N <= up_to:
            p = c.period + N
            if p not in known:
                known[p] = Column(p, tuple(
                    Entry(e.source_id, shift_down(e.ranks, 2 * N * page.maslov), e.vertical)
                    for e in c.entries))
            N += 1
    cols = tuple(known[p] for p in sorted(known))
    return E1Page(page.spec_name, max(page.lam_max, up_to), page.maslov, cols)


def verify_central_symmetry(page: E1Page, spec: ManifoldSpec) -> list[Diagnostic]:
    """Columns at T and 1 - T must be mirror images under d -> 2 dim - 1 - 2 mu - d."""
    out = []
    center = 2 * spec.dim - 1 - 2 * page.maslov
    for c in page.columns:
        if not (0 < c.period < 1):
            continue
        other = page.column(1 - c.period)
        if other is None:
            continue
        if reflect(c.ranks, center) != other.ranks:
            out.append(Diagnostic(
                "central-symmetry", format_period(c.period),
                f"column {c.ranks} does not mirror the column at {format_period(1 - c.period)} ({other.ranks})"))
    return out


def support_bounds(page: E1Page, spec: ManifoldSpec) -> list[Diagnostic]:
    """Pillars and blocks must lie in the degree windows forced by the index bounds."""
    if not compatibly_weighted(spec):
        raise HypothesisNotMet(f"{spec.name} is not compatibly weighted; support bounds do not apply")
    mu, n = page.maslov, spec.dim
    t = total_cohomology(spec).top() or 0
    out = []
    for c in page.columns:
        if c.period == 0 or not c.ranks:
            continue
        if c.period.denominator == 1:
            N = c.period.numerator
            lo, hi, kind = -2 * N * mu, 2 * n - 1 - 2 * N * mu, "pillar"
        else:
            N = floor(c.period)
            lo, hi, kind = 2 * n - 2 * (N + 1) * mu - t, t - 1 - 2 * N * mu, "block"
        if c.ranks.bottom() < lo or c.ranks.top() > hi:
            out.append(Diagnostic(
                "support-bounds", format_period(c.period),
                f"{kind} column {c.ranks} leaves the window [{lo}, {hi}]"))
    return out


@dataclass(frozen=True)
class ColumnClass:
    period: Fraction
    kind: str  # "constant", "pillar" or "block"
    N: int


def classify(page: E1Page, spec: ManifoldSpec) -> list[ColumnClass]:
    out = []
    for c in page.columns:
        if c.period == 0:
            out.append(ColumnClass(c.period, "constant", 0))
        elif c.period.denominator == 1:
            out.append(ColumnClass(c.period, "pillar", c.period.numerator))
        else:
            out.append(ColumnClass(c.period, "block", floor(c.period)))
    return out


def required_window(spec: ManifoldSpec) -> Fraction:
    """Period beyond which no column can reach the constant-orbit column.

    Pillars up to floor(dim / mu) and blocks with N <= t / (2 mu) can still
    reach degrees of H*(Y); the window closes at the larger of the pillar
    bound and the integer ending the last such block.
    """
    mu = maslov_index(spec)
    t = total_cohomology(spec).top() or 0
    return Fraction(max(spec.dim // mu, t // (2 * mu) + 1))
