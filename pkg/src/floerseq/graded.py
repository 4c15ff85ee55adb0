"""Graded-rank algebra.

Cohomology is tracked only through its ranks over a characteristic-zero
field, so a graded group is a finitely supported map degree -> rank.
Shifts follow the convention ``(A[d])_n = A_{n+d}``: ``shift_down(g, d)``
moves the degree-0 part of ``g`` to degree ``-d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import InconsistentEuler, UnsupportedInput


@dataclass(frozen=True)
class GradedRanks:
    """Finitely supported degree -> positive rank map (zero ranks are dropped)."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for d, r in self.entries:
            if not isinstance(d, int) or not isinstance(r, int):
                raise TypeError("degrees and ranks must be ints")
            if r <= 0:
                raise ValueError(f"rank at degree {d} must be positive, got {r}")
        degs = [d for d, _ in self.entries]
        if degs != sorted(set(degs)):
            raise ValueError("entries must be sorted by degree without repeats")

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple[int, int]] | None = None) -> "GradedRanks":
        """Build from a mapping, accumulating repeated degrees and dropping zeros."""
        acc: dict[int, int] = {}
        items = mapping.items() if isinstance(mapping, Mapping) else (mapping or ())
        for d, r in items:
            d, r = int(d), int(r)
            if r < 0:
                raise ValueError(f"negative rank {r} at degree {d}")
            acc[d] = acc.get(d, 0) + r
        return cls(tuple(sorted((d, r) for d, r in acc.items() if r)))

    @classmethod
    def point(cls) -> "GradedRanks":
        return cls(((0, 1),))

    # mapping-like access
    def __getitem__(self, degree: int) -> int:
        for d, r in self.entries:
            if d == degree:
                return r
        return 0

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def degrees(self) -> list[int]:
        return [d for d, _ in self.entries]

    def total(self) -> int:
        return sum(r for _, r in self.entries)

    def bottom(self) -> int | None:
        return self.entries[0][0] if self.entries else None

    def top(self) -> int | None:
        return self.entries[-1][0] if self.entries else None

    def euler_characteristic(self) -> int:
        return sum(r if d % 2 == 0 else -r for d, r in self.entries)

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d, _ in self.entries)

    def __add__(self, other: "GradedRanks") -> "GradedRanks":
        return GradedRanks.of(list(self.entries) + list(other.entries))

    def scale(self, k: int) -> "GradedRanks":
        return GradedRanks.of({d: r * k for d, r in self.entries})

    def restrict(self, lo: int | None = None, hi: int | None = None) -> "GradedRanks":
        return GradedRanks.of({d: r for d, r in self.entries
                               if (lo is None or d >= lo) and (hi is None or d <= hi)})

    def __repr__(self) -> str:
        return "GradedRanks({" + ", ".join(f"{d}: {r}" for d, r in self.entries) + "})"


def graded_sum(parts: Iterable[GradedRanks]) -> GradedRanks:
    acc: list[tuple[int, int]] = []
    for p in parts:
        acc.extend(p.entries)
    return GradedRanks.of(acc)


def shift_down(g: GradedRanks, d: int) -> GradedRanks:
    """Rank at degree n of the result is g's rank at n + d."""
    return GradedRanks(tuple((deg - d, r) for deg, r in g.entries))


def tensor(a: GradedRanks, b: GradedRanks) -> GradedRanks:
    return GradedRanks.of([(da + db, ra * rb) for da, ra in a for db, rb in b])


def reflect(g: GradedRanks, total: int) -> GradedRanks:
    """Degree d goes to total - d."""
    return GradedRanks.of({total - d: r for d, r in g})


def satisfies_duality(g: GradedRanks, top: int) -> bool:
    return all(g[top - d] == r for d, r in g)


def sphere(n: int) -> GradedRanks:
    if n == 0:
        return GradedRanks.of({0: 2})
    return GradedRanks.of({0: 1, n: 1})


def projective_space(n: int) -> GradedRanks:
    return GradedRanks.of({2 * j: 1 for j in range(n + 1)})


def torus(n: int) -> GradedRanks:
    from math import comb
    return GradedRanks.of({j: comb(n, j) for j in range(n + 1)})


# -- Euler data for sphere bundles ------------------------------------------

@dataclass(frozen=True)
class EulerProfile:
    """Rank of cup product with the Euler class, indexed by target degree.

    kind ``zero``: the map vanishes; ``full``: maximal rank in every degree;
    ``explicit``: ``ranks`` gives rank(H^{d-2r} -> H^d) at target degree d.
    """

    kind: str = "full"
    ranks: GradedRanks = GradedRanks()

    def __post_init__(self):
        if self.kind not in ("zero", "full", "explicit"):
            raise ValueError(f"unknown Euler profile kind {self.kind!r}")
        if self.kind != "explicit" and self.ranks:
            raise ValueError("only explicit profiles carry ranks")

    def cup_rank(self, core: GradedRanks, r: int, target: int) -> int:
        bound = min(core[target - 2 * r], core[target])
        if self.kind == "zero":
            return 0
        if self.kind == "full":
            return bound
        value = self.ranks[target]
        if value > bound:
            raise InconsistentEuler(
                f"Euler cup rank {value} at degree {target} exceeds the bound {bound}")
        return value


def gysin_sphere_bundle(core: GradedRanks, r: int, euler: EulerProfile) -> GradedRanks:
    """Ranks of the total space of an S^{2r-1}-bundle over a space with cohomology `core`."""
    if r < 1:
        raise UnsupportedInput(f"sphere bundle rank must be positive, got {r}")
    if not core:
        return GradedRanks()
    if euler.kind == "explicit":
        for d, _ in euler.ranks:
            euler.cup_rank(core, r, d)
    lo, hi = core.bottom(), core.top() + 2 * r - 1
    out: dict[int, int] = {}
    for k in range(lo, hi + 1):
        coker = core[k] - euler.cup_rank(core, r, k)
        i = k - 2 * r + 1
        ker = core[i] - euler.cup_rank(core, r, i + 2 * r)
        out[k] = coker + ker
    return GradedRanks.of(out)


def leray_hirsch_projectivization(core: GradedRanks, r: int) -> GradedRanks:
    """Cohomology ranks of the projectivisation of a rank-r bundle over `core`."""
    if r < 1:
        raise UnsupportedInput(f"projectivised bundle rank must be positive, got {r}")
    return graded_sum(shift_down(core, -2 * j) for j in range(r))


# -- slice cohomology ---------------------------------------------------------

@dataclass(frozen=True)
class IntersectionForm:
    """Middle-dimensional intersection pairing: nondegenerate, zero, or with a kernel of given rank."""

    kind: str = "nondegenerate"
    kernel: int = 0

    def __post_init__(self):
        if self.kind not in ("nondegenerate", "zero", "kernel_rank"):
            raise ValueError(f"unknown intersection form kind {self.kind!r}")
        if self.kind == "kernel_rank" and self.kernel < 0:
            raise ValueError("kernel rank must be nonnegative")

    def kernel_rank(self, middle_rank: int) -> int:
        if self.kind == "nondegenerate":
            return 0
        if self.kind == "zero":
            return middle_rank
        return self.kernel


def slice_cohomology(hY: GradedRanks, n: int, form: IntersectionForm) -> GradedRanks:
    """Ranks of the level hypersurface at infinity from the ranks of H*(Y), Y of complex dim n."""
    if n < 1:
        raise UnsupportedInput("complex dimension must be positive")
    if hY and (hY.bottom() < 0 or hY.top() > n):
        raise UnsupportedInput(f"H*(Y) must be supported in [0, {n}], got {hY}")
    kerpsi = form.kernel_rank(hY[n])
    if kerpsi > hY[n]:
        raise UnsupportedInput(f"kernel rank {kerpsi} exceeds middle rank {hY[n]}")
    out: dict[int, int] = {}
    for k in range(0, 2 * n):
        if k <= n - 2:
            out[k] = hY[k]
        elif k >= n + 1:
            out[k] = hY[2 * n - 1 - k]
        else:
            out[k] = hY[n - 1] + kerpsi
    return GradedRanks.of(out)


def family_slice_betti(spec, fam) -> GradedRanks:
    """Ranks of the slice of a torsion family; the same at every period k/m."""
    from .model import BundleStructure, bundle_rank

    st = fam.structure
    if isinstance(st, BundleStructure):
        return gysin_sphere_bundle(st.core_betti, bundle_rank(spec, fam), st.euler)
    return st.slice_betti


def family_quotient_betti(spec, fam) -> GradedRanks:
    """Ranks of the slice modulo the circle action."""
    from .errors import MissingQuotientData
    from .model import BundleStructure, bundle_rank

    st = fam.structure
    if isinstance(st, BundleStructure):
        return leray_hirsch_projectivization(st.core_betti, bundle_rank(spec, fam))
    if st.quotient_betti is None:
        raise MissingQuotientData(f"Z/{fam.m}:{fam.id} gives slice data but no quotient cohomology")
    return st.quotient_betti
