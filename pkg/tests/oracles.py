"""Independent oracles used by the tests.

Nothing here imports the package's index or solver code: W, Floer indices
and matchings are recomputed from their definitions.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from floerseq.solver import Source, Target, TwoRowProblem


# -- index calculus from the definitions ---------------------------------------

def W(x: Fraction) -> int:
    a, b = x.numerator, x.denominator
    if b == 1:
        return 2 * a
    return 2 * (a // b) + 1


def floer(weights: dict[int, int], lam: Fraction) -> int:
    return sum(h * (1 - W(lam * k)) for k, h in weights.items() if k)


def morse_bott(weights: dict[int, int]) -> int:
    return 2 * sum(h for k, h in weights.items() if k < 0)


def maslov(weights: dict[int, int]) -> int:
    return sum(k * h for k, h in weights.items())


def epsilon(weights: dict[int, int], lam: Fraction) -> Fraction:
    """A step smaller than the distance from lam to any other critical time."""
    top = max([abs(k) for k in weights if k] + [1])
    return Fraction(1, 4 * top * top * lam.denominator)


# -- closed-form weights of the cyclic quotient resolutions ------------------------

def cyclic_weights(k: int) -> list[tuple[int, ...]]:
    """Tangent weights at the fixed components of the resolution of C^2 / (Z/k).

    Odd k: the weight-2 action has k fixed points with weights (k - 2j, 2 - k + 2j).
    Even k: the square-root action fixes the middle sphere (weights 0, 1) and
    the j-th point out along either arm has weights (-j, j + 1).
    """
    if k % 2:
        return sorted(tuple(sorted((k - 2 * j, 2 - k + 2 * j))) for j in range(k))
    h = k // 2 - 1
    pts = [(0, 1)] + [tuple(sorted((-j, j + 1))) for j in range(1, h + 1)] * 2
    return sorted(pts)


# -- brute-force matchings ------------------------------------------------------------

def _distributions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _distributions(total - first, slots - 1):
            yield (first,) + rest


def matchings(problem: TwoRowProblem, prefix: Fraction):
    """Every admissible matrix saturating the sources with period <= prefix."""
    srcs = [i for i, s in enumerate(problem.sources) if s.period <= prefix]
    options = []
    for i in srcs:
        s = problem.sources[i]
        adm = [j for j, t in enumerate(problem.targets) if problem_admissible(s, t)]
        options.append([(i, dict(zip(adm, d))) for d in _distributions(s.rank, len(adm))])
    for choice in product(*options):
        used = [0] * len(problem.targets)
        hub = {}
        for i, row in choice:
            p = problem.sources[i].period
            for j, x in row.items():
                used[j] += x
                if p in problem.hub_caps and problem.targets[j].period < p:
                    hub[p] = hub.get(p, 0) + x
        if any(u > t.rank for u, t in zip(used, problem.targets)):
            continue
        if any(v > problem.hub_caps[p] for p, v in hub.items()):
            continue
        yield dict(choice)


def problem_admissible(s: Source, t: Target) -> bool:
    """Which source classes may kill which target classes, restated from the rules."""
    if t.period == 0:
        return not s.forbid_zero and not (t.is_min and s.forbid_min)
    if t.period < s.period:
        return True
    return t.period == s.period and s.flexible and t.flexible


def brute_force(problem: TwoRowProblem, periods: list[Fraction]):
    """("infeasible", p) or {lam: (min, max)} of column-0 kills by sources up to lam."""
    src_periods = sorted({s.period for s in problem.sources})
    full = list(matchings(problem, max(src_periods))) if src_periods else [{}]
    if not full:
        for p in src_periods:
            if not any(True for _ in matchings(problem, p)):
                return ("infeasible", p)
    out = {}
    for lam in periods:
        kills = []
        for m in full:
            kills.append(sum(x for i, row in m.items() if problem.sources[i].period <= lam
                             for j, x in row.items() if problem.targets[j].period == 0))
        out[lam] = (min(kills), max(kills))
    return out


PERIODS = [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2)]


def random_problem(rng: random.Random) -> tuple[TwoRowProblem, list[Fraction]]:
    sources = []
    for i in range(rng.randint(1, 3)):
        sources.append(Source(rng.choice(PERIODS), f"s{i}", rng.randint(1, 2),
                              flexible=rng.random() < 0.4, forbid_zero=rng.random() < 0.1,
                              forbid_min=rng.random() < 0.25))
    targets = [Target(Fraction(0), f"z{j}", rng.randint(1, 3), is_min=(j == 0))
               for j in range(rng.randint(1, 3))]
    for j in range(rng.randint(0, 2)):
        targets.append(Target(rng.choice(PERIODS[:-1]), f"t{j}", rng.randint(1, 2),
                              flexible=rng.random() < 0.5))
    hub = {}
    if rng.random() < 0.3:
        p = rng.choice(PERIODS)
        hub[p] = rng.randint(0, 2)
        # sources sharing a capped period share their column-0 restrictions
        same = [i for i, s in enumerate(sources) if s.period == p]
        if same:
            first = sources[same[0]]
            for i in same:
                s = sources[i]
                sources[i] = Source(s.period, s.key, s.rank, s.flexible, first.forbid_zero, first.forbid_min)
    periods = sorted(set(rng.sample(PERIODS, 3)) | {s.period for s in sources})
    return TwoRowProblem(sources, targets, hub), periods
