"""Index calculus in exact rational arithmetic.

W(x) = 2*floor(x) + 1 off the integers and 2x on them. Floer indices,
critical times and slice gradings are all built from it. Floats never
enter: every test in here is an integrality test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, lcm

from .errors import CrossCheckFailure, MaslovMismatch, NonPositiveMaslov, UnsupportedInput
from .model import (ExplicitStructure, FixedComponent, ManifoldSpec, TorsionFamily,
                    family_rank)

Period = Fraction


def as_period(x) -> Fraction:
    """Parse "k/m", an int or a Fraction into a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read a period from {x!r}")


def format_period(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def w_eval(x) -> int:
    x = Fraction(x)
    if x.denominator == 1:
        return 2 * x.numerator
    return 2 * floor(x) + 1


def component_maslov(c: FixedComponent) -> int:
    return sum(k * h for k, h in c.weights.nonzero)


def maslov_index(spec: ManifoldSpec) -> int:
    values = {c.id: component_maslov(c) for c in spec.components}
    if not values:
        raise UnsupportedInput("spec has no fixed components")
    if len(set(values.values())) > 1:
        raise MaslovMismatch(values)
    mu = next(iter(values.values()))
    if mu <= 0:
        raise NonPositiveMaslov(mu)
    return mu


def morse_bott_index(c: FixedComponent) -> int:
    return 2 * sum(h for k, h in c.weights.nonzero if k < 0)


def floer_index(c: FixedComponent, lam) -> int:
    lam = Fraction(lam)
    if lam <= 0:
        raise UnsupportedInput(f"slope must be positive, got {lam}")
    return sum(h * (1 - w_eval(lam * k)) for k, h in c.weights.nonzero)


def all_weights(spec: ManifoldSpec) -> list[int]:
    return sorted({abs(k) for c in spec.components for k, _ in c.weights.nonzero})


def is_critical(spec: ManifoldSpec, lam) -> bool:
    lam = Fraction(lam)
    return any((lam * k).denominator == 1 for k in all_weights(spec))


def _scale(spec: ManifoldSpec, lam: Fraction) -> int:
    return lcm(*all_weights(spec), lam.denominator) if all_weights(spec) else lam.denominator


def lam_plus(spec: ManifoldSpec, lam) -> Fraction:
    """A slope just above `lam`, below the next critical time."""
    lam = Fraction(lam)
    return lam + Fraction(1, 2 * _scale(spec, lam))


def lam_minus(spec: ManifoldSpec, lam) -> Fraction:
    lam = Fraction(lam)
    return lam - Fraction(1, 2 * _scale(spec, lam))


def component_floer_plus(c: FixedComponent, lam: Fraction) -> int:
    scale = lcm(*(abs(k) for k, _ in c.weights.nonzero), lam.denominator) if c.weights.nonzero else 1
    return floer_index(c, lam + Fraction(1, 2 * scale))


def lambda_min(c: FixedComponent) -> Fraction | None:
    """First critical time of the component, min 1/|k| over its weights."""
    if not c.weights.nonzero:
        return None
    return min(Fraction(1, abs(k)) for k, _ in c.weights.nonzero)


@dataclass(frozen=True)
class CriticalTime:
    period: Fraction
    components: frozenset
    families: tuple  # (m, id) pairs whose slice sits at this period

    @property
    def integer(self) -> bool:
        return self.period.denominator == 1

    @property
    def outer(self) -> bool:
        return self.integer or bool(self.families)


def critical_times(spec: ManifoldSpec, lam_max) -> list[CriticalTime]:
    """All k/|w| <= lam_max, annotated with affected components and families.

    Integer times are always outer (they carry the whole slice).
    """
    lam_max = Fraction(lam_max)
    if lam_max <= 0:
        return []
    by_period: dict[Fraction, set[str]] = {}
    for c in spec.components:
        for k, _ in c.weights.nonzero:
            a = abs(k)
            for j in range(1, floor(lam_max * a) + 1):
                by_period.setdefault(Fraction(j, a), set()).add(c.id)
    out = []
    for p in sorted(by_period):
        fams = tuple(f.key for f in spec.families if f.m == p.denominator)
        out.append(CriticalTime(p, frozenset(by_period[p]), fams))
    return out


def outer_periods(spec: ManifoldSpec, lam_max) -> list[Fraction]:
    """Periods in (0, lam_max] carrying a column: integers and k/m with an m-family."""
    lam_max = Fraction(lam_max)
    ps: set[Fraction] = set(Fraction(n) for n in range(1, floor(lam_max) + 1))
    for m in {f.m for f in spec.families}:
        for k in range(1, floor(lam_max * m) + 1):
            p = Fraction(k, m)
            if p.denominator == m:
                ps.add(p)
    return sorted(ps)


def unstable_components(spec: ManifoldSpec, T) -> list[FixedComponent]:
    """Components whose Floer index jumps at T."""
    T = Fraction(T)
    return [c for c in spec.components if any((T * k).denominator == 1 for k, _ in c.weights.nonzero)]


def slice_grading(spec: ManifoldSpec, fam: TorsionFamily, T) -> int:
    """Bottom degree of the column of `fam` at the non-integer period T.

    Computed as codim - sum W(T w) over the minimal member and checked against
    the two jump formulas for the Floer index of that member.
    """
    T = Fraction(T)
    if T <= 0 or T.denominator != fam.m:
        raise UnsupportedInput(f"period {T} is not of the form k/{fam.m} in lowest terms")
    if isinstance(fam.structure, ExplicitStructure):
        base = T - floor(T)
        g = fam.structure.grading_at(base)
        if g is None:
            raise UnsupportedInput(f"no slice grading given for Z/{fam.m}:{fam.id} at {base}")
        return g - 2 * floor(T) * maslov_index(spec)
    c = spec.component(fam.min_member)
    rank = family_rank(spec, fam)
    codim = spec.dim - (c.dimc + rank)
    value = codim - sum(h * w_eval(T * k) for k, h in c.weights.nonzero)
    if value % 2:
        raise CrossCheckFailure(f"slice grading {value} of Z/{fam.m}:{fam.id} at {T} is odd")
    at_T = floer_index(c, T) - rank
    plus = component_floer_plus(c, T)
    if not (value == at_T == plus):
        raise CrossCheckFailure(
            f"slice grading of Z/{fam.m}:{fam.id} at {T}: direct {value}, "
            f"index minus rank {at_T}, index just above {plus}")
    return value


def integer_slice_grading(spec: ManifoldSpec, N: int) -> int:
    return -2 * N * maslov_index(spec)


def periodicity_shift(spec: ManifoldSpec, fam: TorsionFamily, T, N: int) -> int:
    T = Fraction(T)
    value = slice_grading(spec, fam, T) - 2 * N * maslov_index(spec)
    if N:
        direct = slice_grading(spec, fam, T + N)
        if direct != value:
            raise CrossCheckFailure(
                f"periodicity of Z/{fam.m}:{fam.id}: {direct} at {T + N} but {value} by shifting")
    return value


def compatibly_weighted(spec: ManifoldSpec) -> bool:
    for c in spec.components:
        delta = 0
        for a in sorted({abs(k) for k, _ in c.weights.nonzero}, reverse=True):
            delta += c.weights.h(a) - c.weights.h(-a)
            if delta < 0:
                return False
    return True
