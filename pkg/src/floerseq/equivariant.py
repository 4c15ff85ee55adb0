"""Circle-equivariant layer.

An equivariant column is the cohomology of the slice modulo the circle,
moved up by one. When every such column is odd the equivariant sequence
collapses, and the only differentials hit the constant-orbit column
H*(Y) tensored with the module F = K[u^-1], whose copies of a generator in
degree d sit in degrees d, d - 2, d - 4, ... Ranks of F-modules are kept
as the ranks of their u^0 generators; the copies are added lazily down to a
degree cutoff.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import HypothesisNotMet, NegativeRank
from .graded import GradedRanks, family_quotient_betti, graded_sum, shift_down
from .index import format_period, maslov_index, outer_periods, slice_grading
from .model import Diagnostic, ManifoldSpec, total_cohomology
from .page import Column, E1Page, Entry
from .solver import FiltrationReport

DEFAULT_CUTOFF = -20


def equivariant_column(spec: ManifoldSpec, fam, T) -> GradedRanks:
    """Quotient cohomology of the slice of `fam` at the non-integer period T, in total degrees."""
    T = Fraction(T)
    return shift_down(family_quotient_betti(spec, fam), -1 - slice_grading(spec, fam, T))


def _torsion_base(spec: ManifoldSpec) -> list[tuple[Fraction, str, GradedRanks]]:
    """Equivariant family columns at the non-integer periods in (0, 1)."""
    out = []
    for T in outer_periods(spec, 1):
        if T.denominator == 1:
            continue
        for f in spec.families:
            if f.m == T.denominator:
                out.append((T, f"Z/{f.m}:{f.id}", equivariant_column(spec, f, T)))
    return out


def _lhs(H: GradedRanks, n: int) -> int:
    return sum(r for d, r in H if d >= n and (d - n) % 2 == 0)


def _torsion_rhs(base, mu: int, n: int) -> int:
    """Rank in degree n of the family terms, columns moved up by one and repeated with period one."""
    total = 0
    for _, _, col in base:
        if not col:
            continue
        N = 0
        while col.top() + 1 - 2 * N * mu >= n:
            total += col[n - 1 + 2 * N * mu]
            N += 1
    return total


def solve_equivariant_slice(spec: ManifoldSpec, degree_cutoff: int = DEFAULT_CUTOFF) -> GradedRanks:
    """Equivariant cohomology ranks of the slice at infinity.

    Solves the balance between sum_i H*(Y)[2i] and all equivariant columns
    from the top degree down: the pillar terms at N = 1, 2, ... shift the
    unknown by strictly decreasing amounts, so each degree fixes one rank.
    """
    mu = maslov_index(spec)
    H = total_cohomology(spec)
    base = _torsion_base(spec)
    E: dict[int, int] = {}
    for k in range(2 * spec.dim - 1, 0, -1):
        n = k + 1 - 2 * mu
        known = sum(E.get(k + 2 * (N - 1) * mu, 0) for N in range(2, (2 * spec.dim) // max(mu, 1) + 2))
        value = _lhs(H, n) - _torsion_rhs(base, mu, n) - known
        if value < 0:
            raise NegativeRank(k, value)
        E[k] = value
    return GradedRanks.of(E)


def pillar_column(spec: ManifoldSpec, N: int, eh_sigma: GradedRanks | None = None) -> GradedRanks:
    eh = solve_equivariant_slice(spec) if eh_sigma is None else eh_sigma
    return shift_down(eh, 2 * N * maslov_index(spec))


def assemble_equivariant_page(spec: ManifoldSpec, lam_max) -> E1Page:
    """Column 0 holds the u^0 generators H*(Y); other columns are equivariant slice ranks."""
    lam_max = Fraction(lam_max)
    mu = maslov_index(spec)
    H = total_cohomology(spec)
    eh = solve_equivariant_slice(spec)
    cols = [Column(Fraction(0), (Entry("H*(Y)", H),))]
    for T in outer_periods(spec, lam_max):
        if T.denominator == 1:
            cols.append(Column(T, (Entry("Sigma", shift_down(eh, 2 * T.numerator * mu)),)))
            continue
        entries = tuple(Entry(f"Z/{f.m}:{f.id}", equivariant_column(spec, f, T))
                        for f in spec.families if f.m == T.denominator)
        cols.append(Column(T, entries))
    return E1Page(spec.name, lam_max, mu, tuple(cols))


def check_collapse(spec: ManifoldSpec, page_eq: E1Page) -> list[Diagnostic]:
    out = []
    for c in page_eq.columns:
        if c.period == 0:
            continue
        for e in c.entries:
            even = [d for d in e.ranks.degrees() if d % 2 == 0]
            if even:
                out.append(Diagnostic("collapse", f"{format_period(c.period)}:{e.source_id}",
                                      f"equivariant column has even degrees {even}"))
    return out


def eq27_identity(spec: ManifoldSpec, degree_cutoff: int = DEFAULT_CUTOFF) -> list[Diagnostic]:
    """Compare sum_i H*(Y)[2i] with all equivariant columns, degree by degree down to the cutoff."""
    if spec.csr_weight is None:
        raise HypothesisNotMet(f"{spec.name} has no conical weight; symplectic cohomology need not vanish")
    try:
        eh = solve_equivariant_slice(spec, degree_cutoff)
    except NegativeRank as exc:
        return [Diagnostic("eq-slice", spec.name, str(exc))]
    mu = maslov_index(spec)
    H = total_cohomology(spec)
    base = _torsion_base(spec)
    out = []
    top = max((H.top() or 0), 2 * spec.dim)
    for n in range(top, degree_cutoff - 1, -1):
        pillars = sum(eh[n - 1 + 2 * N * mu] for N in range(1, (top - degree_cutoff) // (2 * mu) + 3))
        lhs, rhs = _lhs(H, n), _torsion_rhs(base, mu, n) + pillars
        if lhs != rhs:
            out.append(Diagnostic("eq-identity", str(n), f"left side has rank {lhs}, columns give {rhs}"))
    # the slice and its quotient are related by the Gysin sequence of the circle bundle
    from .page import sigma_betti

    hs = sigma_betti(spec)
    for k, r in hs:
        if r > eh[k + 1] + eh[k]:
            out.append(Diagnostic("eq-slice", str(k),
                                  f"H^{k} of the slice ({r}) exceeds what the quotient allows ({eh[k + 1] + eh[k]})"))
    return out


def _u_rule_forbidden(spec: ManifoldSpec, period: Fraction, entry: Entry) -> int:
    """Bottom classes that cannot kill u^0 generators: those of projectivised quotients of rank >= 2."""
    from .model import BundleStructure, bundle_rank

    if period.denominator == 1:
        # a pillar counts when its quotient has the shape of CP^k with k >= 1
        g = entry.ranks
        ok = len(g) >= 2 and all(r == 1 for _, r in g) and g.degrees() == list(range(g.bottom(), g.top() + 1, 2))
        return g[g.bottom()] if ok else 0
    fid = entry.source_id.split(":", 1)[1]
    for f in spec.families:
        if f.m == period.denominator and f.id == fid and isinstance(f.structure, BundleStructure):
            if bundle_rank(spec, f) >= 2:
                return entry.ranks[entry.ranks.bottom()]
    return 0


def equivariant_filtration_bounds(spec: ManifoldSpec, eq_page: E1Page | None = None, constraints=None,
                                  u_rule: bool = False, lam_max=None) -> FiltrationReport:
    """Intervals for the u^0 part of H*(Y) killed by the equivariant columns up to each period.

    Every odd class of a positive column must kill a class of H*(Y) tensor F
    one degree up: a u^0 generator or one of the copies u^{-i} of a lower
    generator. Nothing else constrains the choice, so the bounds at slope
    lam come from sending the prefix sources to copies first (minimum) or
    to generators first (maximum), with copies reserved for later sources
    that may only hit copies.
    """
    if eq_page is None:
        from .page import required_window

        eq_page = assemble_equivariant_page(spec, lam_max if lam_max is not None else required_window(spec))
    mu = eq_page.maslov
    H = total_cohomology(spec)
    periods = [c.period for c in eq_page.columns if c.period > 0]
    notes = ["equivariant bounds on u^0 generators"]
    if u_rule:
        notes.append("u-rule: bottom classes of projectivised quotients of rank >= 2 avoid u^0 generators")
    # sources beyond the window, by periodicity, so that reservations are complete
    base = [c for c in eq_page.columns if 0 < c.period <= 1]
    far: list[tuple[Fraction, int, int, int]] = []  # (period, degree, allowed, forbidden)
    for c in base:
        N = 0
        while True:
            p = c.period + N
            shifted = [(e, shift_down(e.ranks, 2 * N * mu)) for e in c.entries]
            if all(not g or g.top() < (H.bottom() or 0) - 1 for _, g in shifted):
                break
            for e, g in shifted:
                bad = _u_rule_forbidden(spec, c.period, e) if u_rule else 0
                bottom = g.bottom() if g else None
                for d, r in g:
                    f = bad if d == bottom else 0
                    far.append((p, d, r - f, f))
            N += 1
    cells = []
    for e, U in H:
        C = sum(H[e + 2 * i] for i in range(1, (H.top() - e) // 2 + 1))
        src = [(p, a, f) for p, d, a, f in far if d == e - 1]
        for lam in periods:
            A_p = sum(a for p, a, _ in src if p <= lam)
            F_p = sum(f for p, _, f in src if p <= lam)
            F_l = sum(f for p, _, f in src if p > lam)
            room = max(C - F_p - F_l, 0)
            lo = max(0, A_p - room)
            hi = min(U, A_p)
            cells.append((lam, e, min(lo, hi), hi))
    return FiltrationReport(spec.name, "equivariant", tuple(periods), H, tuple(sorted(cells)), tuple(notes))
