"""Filtration deduction by rank bookkeeping.

With H*(Y) in even degrees the spectral sequence splits into two-row
problems: every odd class of degree d in a positive-period column must kill
an even class of degree d+1 in a column strictly to its left (or in its own
column when vertical differentials are allowed). Each such problem is a
bipartite flow; min-cost flows give the least and greatest number of
H*(Y)-classes killed by columns up to a given period.

When H*(Y) has odd classes only conservation bounds are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .errors import CriticalLambda, Infeasible, UnsupportedInput
from .graded import GradedRanks, graded_sum, shift_down
from .index import (floer_index, format_period, is_critical, lam_minus, lam_plus, lambda_min,
                    outer_periods, unstable_components)
from .model import (BlockTopClass, Diagnostic, FiltrationFullAt, ManifoldSpec,
                    UnitKilledByPillar, UnstableOnly, minimum_component, total_cohomology)
from .page import E1Page

__all__ = [
    "FiltrationReport", "convergence_target", "pairing_consistency", "solve_filtration",
    "step_consistency", "filtration_to_ideal_report", "solve_two_row",
]


def convergence_target(spec: ManifoldSpec, lam) -> GradedRanks:
    """Ranks of HF*(lam H): each component raised by its Floer index at lam."""
    lam = Fraction(lam)
    if is_critical(spec, lam):
        raise CriticalLambda(lam)
    return graded_sum(shift_down(c.betti, -floer_index(c, lam)) for c in spec.components)


def _generic_slopes(spec: ManifoldSpec, page: E1Page, lam) -> list[Fraction]:
    """One generic slope in each interval cut out by the page's periods up to lam."""
    lam = Fraction(lam)
    ps = [p for p in page.periods if 0 < p <= lam]
    weights = [abs(k) for c in spec.components for k, _ in c.weights.nonzero]
    first = Fraction(1, 2 * max(weights, default=1))
    return [first] + [lam_plus(spec, p) for p in ps]


def _prefix_ranks(page: E1Page, lam: Fraction) -> GradedRanks:
    return graded_sum(c.ranks for c in page.columns if c.period <= lam)


def pairing_consistency(page: E1Page, spec: ManifoldSpec, lam=None) -> list[Diagnostic]:
    """Odd classes up to a generic slope pair off with the even classes one degree up."""
    H = total_cohomology(spec)
    if not H.is_even():
        return [Diagnostic("skipped", spec.name, "H*(Y) has odd classes; pairing check does not apply")]
    lam = page.lam_max if lam is None else Fraction(lam)
    out = []
    for lp in _generic_slopes(spec, page, lam):
        tot = _prefix_ranks(page, lp)
        target = convergence_target(spec, lp)
        for d in sorted({x for x in tot.degrees() if x % 2} | {x - 1 for x in tot.degrees() if x % 2 == 0}):
            if d % 2 == 0:
                continue
            lhs, rhs = tot[d], tot[d + 1] - target[d + 1]
            if lhs != rhs:
                out.append(Diagnostic(
                    "pairing", f"slope {format_period(lp)}",
                    f"degree {d}: {lhs} odd classes but {rhs} even classes in degree {d + 1} must die"))
        odd_target = [x for x in target.degrees() if x % 2]
        if odd_target:
            out.append(Diagnostic("pairing", f"slope {format_period(lp)}",
                                  f"Floer cohomology has odd degrees {odd_target}"))
    return out


def step_consistency(spec: ManifoldSpec, page: E1Page, T) -> list[Diagnostic]:
    """The two-column sequence at T must connect the Floer groups on either side."""
    T = Fraction(T)
    before = convergence_target(spec, lam_minus(spec, T))
    after = convergence_target(spec, lam_plus(spec, T))
    col = page.column(T)
    colr = col.ranks if col is not None else GradedRanks()
    degs = before.degrees() + after.degrees() + colr.degrees()
    if not degs:
        return []
    c = 0
    for d in range(min(degs), max(degs) + 1):
        c = before[d] + colr[d] - c - after[d]
        if c < 0:
            return [Diagnostic("step", format_period(T),
                               f"no differential rank fits at degree {d}: Floer groups {before} and {after}, column {colr}")]
    if c != 0:
        return [Diagnostic("step", format_period(T), f"ranks do not balance in the top degree (left over {c})")]
    return []


# -- the flow model -------------------------------------------------------------

@dataclass(frozen=True)
class Source:
    period: Fraction
    key: str
    rank: int
    flexible: bool = False
    forbid_zero: bool = False  # may not hit any column-0 target
    forbid_min: bool = False   # may not hit column-0 classes of the minimum


@dataclass(frozen=True)
class Target:
    period: Fraction
    key: str
    rank: int
    flexible: bool = False
    is_min: bool = False  # column-0 class of the minimal component


@dataclass
class TwoRowProblem:
    """Sources are odd classes of one degree, targets even classes one degree up.

    A hub cap bounds the leftward kills of all sources of one period together,
    so those sources must agree on which column-0 targets they may hit.
    """

    sources: list[Source]
    targets: list[Target]
    hub_caps: dict = field(default_factory=dict)  # period -> cap on leftward kills

    def __post_init__(self):
        for p in self.hub_caps:
            flags = {(s.forbid_zero, s.forbid_min) for s in self.sources if s.period == p}
            if len(flags) > 1:
                raise UnsupportedInput(f"sources at capped period {p} disagree on column-0 restrictions")

    def admissible(self, s: Source, t: Target) -> bool:
        if t.period == 0:
            if s.forbid_zero or (t.is_min and s.forbid_min):
                return False
            return True
        if t.period < s.period:
            return True
        return t.period == s.period and s.flexible and t.flexible


def _graph(problem: TwoRowProblem, prefix: Fraction, count_upto: Fraction | None, sign: int) -> nx.DiGraph:
    """Flow network over sources up to `prefix`; column-0 kills by sources up to `count_upto` cost `sign`."""
    G = nx.DiGraph()
    G.add_node("s")
    G.add_node("t")
    for j, t in enumerate(problem.targets):
        G.add_edge(("T", j), "t", capacity=t.rank, weight=0)
    for i, s in enumerate(problem.sources):
        if s.period > prefix:
            continue
        G.add_edge("s", ("S", i), capacity=s.rank, weight=0)
        counted = count_upto is not None and s.period <= count_upto
        for j, t in enumerate(problem.targets):
            if not problem.admissible(s, t):
                continue
            cost = sign if (counted and t.period == 0) else 0
            if s.period in problem.hub_caps and t.period < s.period:
                hub, hub_out = ("H", s.period), ("Hout", s.period)
                if hub not in G:
                    G.add_edge(hub, hub_out, capacity=problem.hub_caps[s.period], weight=0)
                G.add_edge(("S", i), hub, capacity=s.rank, weight=0)
                G.add_edge(hub_out, ("T", j), capacity=t.rank, weight=cost)
            else:
                G.add_edge(("S", i), ("T", j), capacity=s.rank, weight=cost)
    return G


def _flow(problem: TwoRowProblem, prefix: Fraction, count_upto: Fraction | None, sign: int):
    """Min-cost flow saturating every source up to `prefix`; (None, -1) when no such flow exists."""
    G = _graph(problem, prefix, count_upto, sign)
    need = sum(s.rank for s in problem.sources if s.period <= prefix)
    G.nodes["s"]["demand"] = -need
    G.nodes["t"]["demand"] = need
    try:
        _, flow = nx.network_simplex(G)
    except nx.NetworkXUnfeasible:
        return None, -1
    return flow, need


def _kills(problem: TwoRowProblem, flow, upto: Fraction) -> int:
    total = 0
    for u, out in flow.items():
        if not isinstance(u, tuple) or u[0] not in ("S", "Hout"):
            continue
        per = problem.sources[u[1]].period if u[0] == "S" else u[1]
        if per > upto:
            continue
        for v, f in out.items():
            if isinstance(v, tuple) and v[0] == "T" and problem.targets[v[1]].period == 0:
                total += f
    return total


def solve_two_row(problem: TwoRowProblem, periods: list[Fraction], degree: int = 0):
    """Least and greatest column-0 kills by sources up to each period.

    Every source in the window must be matched; the first prefix that cannot
    be saturated raises Infeasible.
    """
    periods = sorted(periods)
    src_periods = sorted({s.period for s in problem.sources})
    if src_periods and _flow(problem, src_periods[-1], None, 0)[0] is None:
        # any subset of a saturable set is saturable, so scan for the first failing prefix
        for p in src_periods:
            if _flow(problem, p, None, 0)[0] is None:
                raise Infeasible(degree, p)
    top = max(periods + src_periods) if (periods or src_periods) else Fraction(0)
    out = {}
    cache: dict = {}
    for lam in periods:
        # the answer only changes at source periods
        eff = max((p for p in src_periods if p <= lam), default=None)
        if eff is None:
            out[lam] = (0, 0)
            continue
        if eff not in cache:
            fmin, _ = _flow(problem, top, eff, 1)
            fmax, _ = _flow(problem, top, eff, -1)
            cache[eff] = (_kills(problem, fmin, eff), _kills(problem, fmax, eff))
        out[lam] = cache[eff]
    return out


# -- reports ----------------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationReport:
    spec_name: str
    mode: str  # "exact" or "bounds_only"
    periods: tuple[Fraction, ...]
    total: GradedRanks
    cells: tuple  # ((period, degree, lo, hi), ...)
    notes: tuple[str, ...] = ()

    def _cell_map(self) -> dict:
        return {(p, d): (lo, hi) for p, d, lo, hi in self.cells}

    def interval(self, lam, degree: int) -> tuple[int, int]:
        """Killed rank in `degree` at slope lam (constant between reported periods)."""
        lam = Fraction(lam)
        ps = [p for p in self.periods if p <= lam]
        if not ps:
            return (0, 0)
        return self._cell_map().get((ps[-1], degree), (0, 0))

    def degrees(self) -> list[int]:
        return self.total.degrees()

    def determined(self, lam, degree: int) -> bool:
        lo, hi = self.interval(lam, degree)
        return lo == hi

    def exact_ranks(self, lam) -> dict[int, int] | None:
        """Degree -> killed rank at lam, or None when some cell is an interval."""
        out = {}
        for d in self.degrees():
            lo, hi = self.interval(lam, d)
            if lo != hi:
                return None
            if lo:
                out[d] = lo
        return out

    def is_full(self, lam) -> bool:
        return all(self.interval(lam, d) == (r, r) for d, r in self.total)

    def steps(self) -> list[tuple[Fraction, dict[int, tuple[int, int]]]]:
        """Periods where some interval changes, with the intervals there."""
        out = []
        prev = {d: (0, 0) for d in self.degrees()}
        for p in self.periods:
            cur = {d: self.interval(p, d) for d in self.degrees()}
            if cur != prev:
                out.append((p, {d: v for d, v in cur.items() if v != (0, 0)}))
            prev = cur
        return out


def _eq10_bound(spec: ManifoldSpec):
    mn = minimum_component(spec)
    if mn is None:
        return None, None
    return mn, lambda_min(mn)


def _exact_report(spec: ManifoldSpec, page: E1Page, constraints, periods) -> tuple[dict, list[str]]:
    H = total_cohomology(spec)
    notes: list[str] = []
    mn, lmin = _eq10_bound(spec)
    unit_by = [c.N for c in constraints if isinstance(c, UnitKilledByPillar)]
    blocks = [c for c in constraints if isinstance(c, BlockTopClass)]
    unstable = any(isinstance(c, UnstableOnly) and c.enabled for c in constraints)
    zero = page.column(0)
    min_part = mn.betti if mn is not None else GradedRanks()

    unit_pillar = None
    if unit_by:
        N = unit_by[0]
        pc = page.column(N)
        if pc is not None and pc[-1] >= 1 and H[0] >= 1:
            unit_pillar = Fraction(N)
            notes.append(f"unit killed by the pillar at {N}")
        else:
            notes.append(f"pillar {N} lies outside the window; unit constraint not applied")

    cols = [c for c in page.columns if c.period > 0]
    odd = sorted({d for c in cols for d in c.ranks.degrees() if d % 2})
    cells = {}
    for d in odd:
        e = d + 1
        sources, targets = [], []
        for c in cols:
            for k, en in enumerate(c.entries):
                r = en.ranks[d]
                if unit_pillar is not None and d == -1 and c.period == unit_pillar and k == 0:
                    r -= 1
                if r > 0:
                    forbid_zero = any(b.column == c.period and b.forbidden_target_degree == e for b in blocks)
                    forbid_min = lmin is not None and c.period < lmin
                    sources.append(Source(c.period, f"{format_period(c.period)}:{en.source_id}", r,
                                          en.vertical == "flexible", forbid_zero, forbid_min))
                t = en.ranks[e]
                if t > 0:
                    targets.append(Target(c.period, f"{format_period(c.period)}:{en.source_id}", t,
                                          en.vertical == "flexible"))
        h_min = min_part[e] if mn is not None else 0
        if unit_pillar is not None and e == 0:
            h_min -= 1
        h_rest = (zero[e] if zero is not None else H[e]) - (min_part[e] if mn is not None else 0)
        if unit_pillar is not None and e == 0 and mn is None:
            h_rest -= 1
        if h_min > 0:
            targets.append(Target(Fraction(0), "0:min", h_min, is_min=True))
        if h_rest > 0:
            targets.append(Target(Fraction(0), "0:rest", h_rest))
        hubs = {}
        if unstable:
            for p in {s.period for s in sources}:
                hubs[p] = sum(shift_down(c.betti, -floer_index(c, lam_minus(spec, p)))[e]
                              for c in unstable_components(spec, p))
        problem = TwoRowProblem(sources, targets, hubs)
        if not sources:
            continue
        res = solve_two_row(problem, list(periods), d)
        for lam, (lo, hi) in res.items():
            cells[(lam, e)] = (lo, hi)
    if unit_pillar is not None:
        for lam in periods:
            if lam >= unit_pillar:
                lo, hi = cells.get((lam, 0), (0, 0))
                cells[(lam, 0)] = (lo + 1, hi + 1)
    return cells, notes


def _bounds_report(spec: ManifoldSpec, page: E1Page, periods) -> dict:
    H = total_cohomology(spec)
    cells = {}
    running_min = {d: 0 for d in H.degrees()}
    for lam in periods:
        pre = graded_sum(c.ranks for c in page.columns if 0 < c.period <= lam)
        target = convergence_target(spec, lam_plus(spec, lam))
        for d, r in H:
            hi = min(r, pre[d - 1])
            lo = max(running_min[d], r - target[d], 0)
            lo = min(lo, hi)
            running_min[d] = lo
            cells[(lam, d)] = (lo, hi)
    return cells


def solve_filtration(spec: ManifoldSpec, page: E1Page, constraints=None) -> FiltrationReport:
    """Intervals of killed H*(Y)-rank at every period of the page."""
    constraints = tuple(spec.constraints if constraints is None else constraints)
    H = total_cohomology(spec)
    full_at = [c.period for c in constraints if isinstance(c, FiltrationFullAt)]
    periods = sorted({p for p in page.periods if p > 0} | {p for p in full_at if p <= page.lam_max})
    notes: list[str] = []
    if H.is_even():
        mode = "exact"
        cells, notes = _exact_report(spec, page, constraints, periods)
    else:
        mode = "bounds_only"
        cells = _bounds_report(spec, page, periods)
        notes.append("H*(Y) has odd classes: conservation bounds only")
    # degrees never hit by any source stay at zero
    for lam in periods:
        for d in H.degrees():
            cells.setdefault((lam, d), (0, 0))
    if full_at:
        lam0 = min(full_at)
        notes.append(f"filtration forced to be everything from {format_period(lam0)} on")
        for lam in periods:
            if lam >= lam0:
                for d, r in H:
                    cells[(lam, d)] = (r, r)
    flat = tuple(sorted((p, d, lo, hi) for (p, d), (lo, hi) in cells.items() if H[d]))
    return FiltrationReport(spec.name, mode, tuple(periods), H, flat, tuple(notes))


# -- attribution to fixed components ---------------------------------------------

@dataclass(frozen=True)
class IdealStep:
    period: Fraction
    ranks: tuple[tuple[int, int], ...]      # degree -> cumulative killed rank (exact cells)
    attributed: tuple[tuple[int, str, int], ...]  # (degree, component id, rank) forced at this step


def filtration_to_ideal_report(report: FiltrationReport, spec: ManifoldSpec) -> list[IdealStep]:
    """Per period, killed ranks and the components forced to carry the new classes.

    Below the first critical time of the minimum its classes cannot be
    killed; at a period, if one component is the only possible carrier of a
    degree's new classes (after that exclusion, and preferring components
    whose index jumps there) the classes are attributed to it.
    """
    mn, lmin = _eq10_bound(spec)
    per_comp = {c.id: shift_down(c.betti, -2 * sum(h for k, h in c.weights.nonzero if k < 0))
                for c in spec.components}
    out = []
    prev: dict[int, int] = {}
    for lam in report.periods:
        ranks, attributed = [], []
        for d in report.degrees():
            lo, hi = report.interval(lam, d)
            if lo != hi:
                continue
            if lo:
                ranks.append((d, lo))
            inc = lo - prev.get(d, 0)
            prev[d] = lo
            if inc <= 0:
                continue
            cands = [cid for cid, g in per_comp.items() if g[d] > 0
                     and not (mn is not None and cid == mn.id and lmin is not None and lam < lmin)]
            if len(cands) > 1:
                unst = {c.id for c in unstable_components(spec, lam)}
                narrowed = [cid for cid in cands if cid in unst]
                if narrowed and sum(per_comp[c][d] for c in narrowed) >= inc:
                    cands = narrowed
            if len(cands) == 1 and per_comp[cands[0]][d] >= inc:
                attributed.append((d, cands[0], inc))
        out.append(IdealStep(lam, tuple(ranks), tuple(attributed)))
    return out
