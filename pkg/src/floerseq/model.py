"""Combinatorial description of a symplectic C*-manifold.

A spec lists the fixed components (dimension, Betti ranks, tangent weights),
the outer torsion families and any external constraints used by the solver.
Everything here is immutable; `validate_spec` collects every violated
invariant instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .graded import (EulerProfile, GradedRanks, IntersectionForm, graded_sum,
                     satisfies_duality, shift_down)

__all__ = [
    "GradedRanks", "EulerProfile", "IntersectionForm", "WeightMultiset",
    "FixedComponent", "BundleStructure", "ExplicitStructure", "TorsionFamily",
    "UnitKilledByPillar", "FiltrationFullAt", "UnstableOnly", "BlockTopClass",
    "ExternalConstraint", "ManifoldSpec", "Diagnostic", "validate_spec",
    "torsion_coverage_notices", "total_cohomology", "family_rank",
    "minimum_component", "bundle_rank",
]


@dataclass(frozen=True)
class WeightMultiset:
    """Tangent weights at a fixed component: nonzero weight -> multiplicity, plus h_0."""

    nonzero: tuple[tuple[int, int], ...] = ()
    zero_mult: int = 0

    def __post_init__(self):
        keys = [k for k, _ in self.nonzero]
        if keys != sorted(set(keys)):
            raise ValueError("weights must be sorted and distinct")
        for k, h in self.nonzero:
            if k == 0:
                raise ValueError("zero weight belongs in zero_mult")
            if h <= 0:
                raise ValueError(f"multiplicity of weight {k} must be positive")
        if self.zero_mult < 0:
            raise ValueError("zero multiplicity must be nonnegative")

    @classmethod
    def of(cls, weights: Mapping[int, int] | Iterable[int]) -> "WeightMultiset":
        """Build from {weight: mult} or a flat list of weights (zeros included)."""
        acc: dict[int, int] = {}
        items = weights.items() if isinstance(weights, Mapping) else ((w, 1) for w in weights)
        for k, h in items:
            k, h = int(k), int(h)
            if h < 0:
                raise ValueError(f"negative multiplicity at weight {k}")
            acc[k] = acc.get(k, 0) + h
        zero = acc.pop(0, 0)
        return cls(tuple(sorted((k, h) for k, h in acc.items() if h)), zero)

    def h(self, k: int) -> int:
        if k == 0:
            return self.zero_mult
        for w, m in self.nonzero:
            if w == k:
                return m
        return 0

    def total(self) -> int:
        return self.zero_mult + sum(h for _, h in self.nonzero)

    def flat(self) -> list[int]:
        """All weights with multiplicity, zeros first."""
        out = [0] * self.zero_mult
        for k, h in self.nonzero:
            out.extend([k] * h)
        return out

    def as_dict(self) -> dict[int, int]:
        d = dict(self.nonzero)
        if self.zero_mult:
            d[0] = self.zero_mult
        return dict(sorted(d.items()))


@dataclass(frozen=True)
class FixedComponent:
    id: str
    dimc: int
    betti: GradedRanks
    weights: WeightMultiset


@dataclass(frozen=True)
class BundleStructure:
    """Slice is the sphere bundle of a vector bundle over a core with these Betti ranks."""

    core_betti: GradedRanks
    euler: EulerProfile = EulerProfile("full")

    @property
    def core_dimc(self) -> int:
        top = self.core_betti.top() or 0
        return top // 2


@dataclass(frozen=True)
class ExplicitStructure:
    """Slice data given directly; `slice_grading` maps periods in (0, 1) to the grading."""

    slice_betti: GradedRanks
    slice_grading: tuple[tuple[Fraction, int], ...]
    quotient_betti: GradedRanks | None = None
    default_grading: int | None = None

    def grading_at(self, T: Fraction) -> int | None:
        for p, g in self.slice_grading:
            if p == T:
                return g
        return self.default_grading


@dataclass(frozen=True)
class TorsionFamily:
    m: int
    id: str
    members: tuple[str, ...]
    min_member: str
    structure: Union[BundleStructure, ExplicitStructure]
    vertical_policy: str | None = None  # None: decided from the slice shape

    @property
    def key(self) -> tuple[int, str]:
        return (self.m, self.id)


# -- external constraints used by the solver ---------------------------------

@dataclass(frozen=True)
class UnitKilledByPillar:
    N: int


@dataclass(frozen=True)
class FiltrationFullAt:
    period: Fraction


@dataclass(frozen=True)
class UnstableOnly:
    enabled: bool = True


@dataclass(frozen=True)
class BlockTopClass:
    column: Fraction
    forbidden_target_degree: int


ExternalConstraint = Union[UnitKilledByPillar, FiltrationFullAt, UnstableOnly, BlockTopClass]


@dataclass(frozen=True)
class ManifoldSpec:
    name: str
    dim: int
    components: tuple[FixedComponent, ...]
    families: tuple[TorsionFamily, ...] = ()
    csr_weight: int | None = None
    intersection_form: IntersectionForm = IntersectionForm()
    constraints: tuple = ()
    slice_betti: GradedRanks | None = None  # None: derived from H*(Y)

    def component(self, cid: str) -> FixedComponent:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def families_of_order(self, m: int) -> list[TorsionFamily]:
        return [f for f in self.families if f.m == m]

    def constraint(self, kind: type):
        return [c for c in self.constraints if isinstance(c, kind)]


@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.subject}: {self.message}"


# -- derived quantities -------------------------------------------------------

def morse_bott_shift(c: FixedComponent) -> int:
    return 2 * sum(h for k, h in c.weights.nonzero if k < 0)


def total_cohomology(spec: ManifoldSpec) -> GradedRanks:
    """Ranks of H*(Y): each component's Betti ranks raised by its Morse-Bott index."""
    return graded_sum(shift_down(c.betti, -morse_bott_shift(c)) for c in spec.components)


def family_rank(spec: ManifoldSpec, fam: TorsionFamily) -> int:
    """Number of positive weights divisible by m at the minimal member."""
    c = spec.component(fam.min_member)
    return sum(h for k, h in c.weights.nonzero if k > 0 and k % fam.m == 0)


def minimum_component(spec: ManifoldSpec) -> FixedComponent | None:
    """The component with no negative weights (the minimum of the moment map)."""
    mins = [c for c in spec.components if morse_bott_shift(c) == 0]
    return mins[0] if len(mins) == 1 else None


def _component_maslov(c: FixedComponent) -> int:
    return sum(k * h for k, h in c.weights.nonzero)


def validate_spec(spec: ManifoldSpec) -> list[Diagnostic]:
    """Every violated invariant of `spec`, as diagnostics. Empty means valid."""
    out: list[Diagnostic] = []

    def bad(code, subject, message):
        out.append(Diagnostic(code, subject, message))

    if spec.dim < 1:
        bad("dim", spec.name, f"complex dimension must be positive, got {spec.dim}")
    seen: set[str] = set()
    for c in spec.components:
        if c.id in seen:
            bad("duplicate-component", c.id, "component id used twice")
        seen.add(c.id)
        total = c.weights.total()
        if total != spec.dim:
            bad("weight-count", c.id, f"weight count {total} ≠ dim {spec.dim}")
        if c.weights.zero_mult != c.dimc:
            bad("zero-weight", c.id,
                f"multiplicity of weight 0 is {c.weights.zero_mult} but the component has dimension {c.dimc}")
        if c.betti and (c.betti.bottom() < 0 or c.betti.top() > 2 * c.dimc):
            bad("betti-support", c.id, f"Betti ranks {c.betti} outside [0, {2 * c.dimc}]")
        elif not satisfies_duality(c.betti, 2 * c.dimc):
            bad("poincare-duality", c.id, f"Betti ranks {c.betti} are not symmetric about {c.dimc}")
        if c.betti[0] != 1:
            bad("connected", c.id, "a connected component has rank 1 in degree 0")
        if spec.csr_weight is not None:
            s = spec.csr_weight
            for k in sorted({k for k, _ in c.weights.nonzero} | {0}):
                if c.weights.h(k) != c.weights.h(s - k):
                    bad("symplectic-duality", c.id,
                        f"weight-{s} duality needs h_{k} = h_{s - k}, got {c.weights.h(k)} and {c.weights.h(s - k)}")

    maslovs = {c.id: _component_maslov(c) for c in spec.components}
    if len(set(maslovs.values())) > 1:
        shown = ", ".join(f"{k}={v}" for k, v in maslovs.items())
        bad("maslov-mismatch", spec.name, f"Maslov index differs between components: {shown}")
    elif maslovs and next(iter(maslovs.values())) <= 0:
        bad("maslov-positive", spec.name, f"Maslov index must be positive, got {next(iter(maslovs.values()))}")

    keys: set[tuple[int, str]] = set()
    for f in spec.families:
        subj = f"Z/{f.m}:{f.id}"
        if f.key in keys:
            bad("duplicate-family", subj, "family (m, id) used twice")
        keys.add(f.key)
        if f.m < 2:
            bad("torsion-order", subj, f"torsion order must be at least 2, got {f.m}")
            continue
        missing = [x for x in f.members if x not in seen]
        if missing:
            bad("unknown-member", subj, f"unknown component ids {missing}")
        if f.min_member not in f.members:
            bad("min-member", subj, f"minimal member {f.min_member!r} is not among the members")
        if f.min_member not in seen:
            bad("unknown-member", subj, f"unknown minimal member {f.min_member!r}")
            continue
        c = spec.component(f.min_member)
        neg = [k for k, _ in c.weights.nonzero if k < 0 and k % f.m == 0]
        if neg:
            bad("m-minimal", subj,
                f"minimal member {c.id} has negative weights {neg} divisible by {f.m}")
        r = family_rank(spec, f)
        if r < 1:
            bad("outer", subj, f"no positive weight divisible by {f.m} at {c.id}; the family is not outer")
        if f.vertical_policy not in (None, "rigid", "flexible"):
            bad("vertical-policy", subj, f"unknown vertical policy {f.vertical_policy!r}")
        st = f.structure
        if isinstance(st, BundleStructure):
            core = st.core_betti
            if not core or core.bottom() != 0 or core.top() % 2:
                bad("core", subj, f"core Betti ranks {core} must start in degree 0 and end in even degree")
            elif not satisfies_duality(core, core.top()):
                bad("core", subj, f"core Betti ranks {core} are not Poincaré symmetric")
            else:
                br = c.dimc + r - st.core_dimc
                if br < 1:
                    bad("bundle-rank", subj, f"core of dimension {st.core_dimc} leaves no fibre directions")
                elif st.euler.kind == "explicit":
                    for d, v in st.euler.ranks:
                        bound = min(core[d - 2 * br], core[d])
                        if v > bound:
                            bad("euler", subj, f"Euler cup rank {v} at degree {d} exceeds {bound}")
        else:
            gradings = dict(st.slice_grading)
            for p, g in gradings.items():
                if g % 2:
                    bad("slice-grading", subj, f"slice grading {g} at {p} is odd")
                if not (0 < p < 1) or p.denominator != f.m:
                    bad("slice-grading", subj, f"period {p} is not of the form k/{f.m} in (0, 1)")
            if st.default_grading is not None and st.default_grading % 2:
                bad("slice-grading", subj, f"slice grading {st.default_grading} is odd")
            if not gradings and st.default_grading is None:
                bad("slice-grading", subj, "explicit family without slice grading")

    for con in spec.constraints:
        if isinstance(con, UnitKilledByPillar):
            mn = minimum_component(spec)
            if con.N == 2 and spec.csr_weight != 1:
                bad("constraint", "unit_killed_by_pillar", "pillar 2 kills the unit only for weight-1 resolutions")
            elif con.N == 1 and (spec.csr_weight != 2 or mn is None or mn.dimc != 0):
                bad("constraint", "unit_killed_by_pillar",
                    "pillar 1 kills the unit only for weight-2 resolutions with an isolated minimum")
            elif con.N not in (1, 2):
                bad("constraint", "unit_killed_by_pillar", f"pillar must be 1 or 2, got {con.N}")
        elif isinstance(con, FiltrationFullAt):
            if con.period <= 0:
                bad("constraint", "filtration_full_at", "period must be positive")
        elif isinstance(con, BlockTopClass):
            if con.column <= 0:
                bad("constraint", "block_top_class", "column period must be positive")

    if spec.slice_betti is not None and spec.slice_betti and spec.slice_betti.bottom() < 0:
        bad("slice", spec.name, "explicit slice cohomology has negative degrees")
    return out


def torsion_coverage_notices(spec: ManifoldSpec) -> list[Diagnostic]:
    """Notices for weights divisible by some m >= 2 at components in no m-family.

    These are not errors: compact torsion spheres joining two fixed points
    produce such weights without any outer family.
    """
    covered: dict[int, set[str]] = {}
    for f in spec.families:
        covered.setdefault(f.m, set()).update(f.members)
    out = []
    for c in spec.components:
        for k, _ in c.weights.nonzero:
            for m in range(2, abs(k) + 1):
                if k % m == 0 and c.id not in covered.get(m, set()):
                    out.append(Diagnostic("torsion-coverage", c.id,
                                          f"weight {k} is divisible by {m} but the component is in no Z/{m} family"))
    return out


def bundle_rank(spec: ManifoldSpec, fam: TorsionFamily) -> int:
    """Fibre rank of the torsion submanifold over its core (bundle mode only)."""
    st = fam.structure
    if not isinstance(st, BundleStructure):
        raise TypeError("bundle rank is only defined for bundle-mode families")
    return spec.component(fam.min_member).dimc + family_rank(spec, fam) - st.core_dimc
