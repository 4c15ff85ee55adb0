"""Preset manifolds: ADE resolutions, twisted cotangent bundles of projective
space, Springer and Slodowy examples, Higgs moduli and parabolic Higgs moduli.

ADE and parabolic specs come from weight propagation along the attraction
graph. With a weight-1 action the fixed sphere at the branch vertex has
weights (0, 1); walking out along an arm the j-th fixed point has weights
(-j, j + 1), and the outgoing weight w at a leaf is a Z/w torsion line.
A line of weight w also lies in the Z/m fixed locus for every divisor m of
w, so each divisor m >= 2 gets its own line family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from .errors import NotContracting, UnsupportedInput
from .graded import EulerProfile, GradedRanks, projective_space, torus
from .model import (BlockTopClass, BundleStructure, FiltrationFullAt, FixedComponent,
                    IntersectionForm, ManifoldSpec, TorsionFamily, UnitKilledByPillar,
                    WeightMultiset)

POINT = GradedRanks.point()
SPHERE2 = GradedRanks.of({0: 1, 2: 1})


def _comp(cid: str, dimc: int, betti, weights) -> FixedComponent:
    b = betti if isinstance(betti, GradedRanks) else GradedRanks.of(betti)
    return FixedComponent(cid, dimc, b, WeightMultiset.of(weights))


def _divisors(w: int) -> list[int]:
    return [m for m in range(2, w + 1) if w % m == 0]


def _line_families(cid: str, weight: int, tag: str | None = None) -> list[TorsionFamily]:
    """Rank-one line families over a point for every torsion order dividing `weight`."""
    tag = tag or cid
    return [TorsionFamily(m, tag, (cid,), cid, BundleStructure(POINT, EulerProfile("zero")))
            for m in _divisors(weight)]


# -- weight-1 trees ------------------------------------------------------------

def weight1_tree(name: str, arms, root_betti=SPHERE2, constraints=(), csr_weight=1,
                 form=IntersectionForm()) -> ManifoldSpec:
    """A fixed curve with weights (0, 1) and chains of fixed points along each arm."""
    root_betti = root_betti if isinstance(root_betti, GradedRanks) else GradedRanks.of(root_betti)
    comps = [_comp("C", 1, root_betti, [0, 1])]
    fams: list[TorsionFamily] = []
    for a, length in enumerate(arms, start=1):
        for j in range(1, length + 1):
            comps.append(_comp(f"q{a}_{j}", 0, POINT, [-j, j + 1]))
        if length:
            fams.extend(_line_families(f"q{a}_{length}", length + 1))
    return ManifoldSpec(name, 2, tuple(comps), tuple(fams), csr_weight, form, tuple(constraints))


def _weight2_a_odd(k: int) -> ManifoldSpec:
    """Z/k with k odd, standard action: k fixed points with weights (k - 2j, 2j - k + 2)."""
    comps = [_comp(f"p{j}", 0, POINT, [k - 2 * j, 2 * j - k + 2]) for j in range(k)]
    fams = _line_families("p0", k) + _line_families(f"p{k - 1}", k)
    return ManifoldSpec(f"X_Z{k}", 2, tuple(comps), tuple(fams), 2, IntersectionForm(),
                        (UnitKilledByPillar(1),))


def ade_spec(kind: str, n: int | None = None, action="standard") -> ManifoldSpec:
    """Minimal resolution of C^2 / Gamma.

    kind "A" takes n = |Gamma| (so "A", 3 is the A_2 singularity); "D" takes
    the Dynkin index n >= 4; "E6", "E7", "E8" take no n. For type A the
    action may be a pair of leg lengths (a, b) with a + b + 2 = n, giving
    the weight-1 action whose fixed sphere sits after a spheres on one side.
    """
    kind = kind.upper()
    if kind == "A":
        if n is None or n < 2:
            raise UnsupportedInput("type A needs the group order n >= 2")
        if action != "standard":
            a, b = action
            if a < 0 or b < 0 or a + b + 2 != n:
                raise UnsupportedInput(f"leg lengths {action} do not give Z/{n}")
            return weight1_tree(f"X_Z{n}_legs{a}{b}", (a, b), constraints=(UnitKilledByPillar(2),))
        if n % 2:
            return _weight2_a_odd(n)
        h = n // 2 - 1
        return weight1_tree(f"X_Z{n}", (h, h), constraints=(UnitKilledByPillar(2),))
    if action != "standard":
        raise UnsupportedInput("only type A takes a non-standard action")
    if kind == "D":
        if n is None or n < 4:
            raise UnsupportedInput("type D needs n >= 4")
        return weight1_tree(f"D{n}", (1, 1, n - 3), constraints=(UnitKilledByPillar(2),))
    arms = {"E6": (1, 2, 2), "E7": (1, 2, 3), "E8": (1, 2, 4)}
    if kind in arms:
        return weight1_tree(kind, arms[kind], constraints=(UnitKilledByPillar(2),))
    raise UnsupportedInput(f"unknown Dynkin type {kind!r}")


# -- twisted cotangent bundles of projective space ---------------------------------

def twisted_projective_spec(n: int, h=None, s: int | None = None, name: str | None = None) -> ManifoldSpec:
    """T*CP^{n-1} with the torus element t^h composed with the fibre action of weight s.

    Fixed components are the projectivised eigenspaces P(V_c), one per value
    class c of h. The Z/m torsion submanifold over a residue class R of h mod m
    is a bundle over P(V_R) whose fibre collects cotangent directions of weight
    divisible by m; it is outer when that fibre is nonzero.
    """
    if n < 2:
        raise UnsupportedInput("need n >= 2")
    h = tuple(range(n)) if h is None else tuple(int(x) for x in h)
    if len(h) != n:
        raise UnsupportedInput(f"h must have {n} entries")
    spread = max(h) - min(h)
    s = spread + 1 if s is None else s
    if s <= spread:
        raise NotContracting(f"fibre weight {s} does not dominate the spread {spread} of h")
    values = sorted(set(h))
    classes = {v: [j for j in range(n) if h[j] == v] for v in values}
    ids = {v: (f"F{classes[v][0]}" if len(values) > 1 else f"CP{n - 1}") for v in values}
    comps = []
    for v in values:
        c = classes[v]
        others = [j for j in range(n) if h[j] != v]
        weights = ([h[j] - v for j in others] + [0] * (len(c) - 1)
                   + [s + v - h[j] for j in others] + [s] * (len(c) - 1))
        comps.append(_comp(ids[v], len(c) - 1, projective_space(len(c) - 1), weights))
    max_w = max((abs(k) for c in comps for k, _ in c.weights.nonzero), default=0)
    fams = []
    for m in range(2, max_w + 1):
        for r in range(m):
            R = [j for j in range(n) if h[j] % m == r]
            if not R:
                continue
            fibre = len(R) - 1 if s % m == 0 else sum(1 for j in range(n) if h[j] % m == (r + s) % m)
            if fibre == 0:
                continue
            rv = sorted({h[j] for j in R})
            members = tuple(ids[v] for v in rv)
            fams.append(TorsionFamily(m, f"r{r}", members, ids[rv[0]],
                                      BundleStructure(projective_space(len(R) - 1), EulerProfile("full"))))
    cons = (UnitKilledByPillar(2),) if s == 1 else ()
    nm = name or (f"TCP{n - 1}" if len(values) == 1 else f"TCP{n - 1}_twisted_" + "".join(map(str, h)))
    return ManifoldSpec(nm, 2 * (n - 1), tuple(comps), tuple(fams), s, IntersectionForm(), cons)


def cotangent_projective(m: int) -> ManifoldSpec:
    """T*CP^m with the standard fibre action."""
    return twisted_projective_spec(m + 1, [0] * (m + 1), 1, name=f"TCP{m}")


def springer_spec(name: str, betti) -> ManifoldSpec:
    """T*(G/P) with the fibre action: a single fixed component with weights 0 and 1."""
    b = GradedRanks.of(betti)
    d = b.top() // 2
    return ManifoldSpec(name, 2 * d, (_comp(name.split("_")[-1], d, b, {0: d, 1: d}),), (), 1,
                        IntersectionForm(), (UnitKilledByPillar(2),))


# -- Slodowy varieties ------------------------------------------------------------------

def s22_spec() -> ManifoldSpec:
    """Slodowy variety for the partition (2, 2), square-rooted Kazhdan action."""
    comps = (
        _comp("Fmin", 2, {0: 1, 2: 2, 4: 1}, {0: 2, 1: 2}),
        _comp("Fmpx", 1, SPHERE2, [-1, 0, 1, 2]),
    )
    fams = (TorsionFamily(2, "mpx", ("Fmpx",), "Fmpx", BundleStructure(SPHERE2, EulerProfile("full"))),)
    return ManifoldSpec("S22", 4, comps, fams, 1, IntersectionForm(), (UnitKilledByPillar(2),))


def s32_spec() -> ManifoldSpec:
    """Slodowy variety for the partition (3, 2): ten isolated fixed points."""
    outer = [5, -3, 3, -1]
    big = [3, 3, -1, -1]
    leaf = [3, -1, 1, 1]
    comps = (
        _comp("Fmin", 0, POINT, [1, 1, 1, 1]),
        _comp("Fp", 0, POINT, outer), _comp("Fw", 0, POINT, outer),
        _comp("Fbig", 0, POINT, big),
        _comp("Fj'", 0, POINT, big), _comp("Fy'", 0, POINT, big),
        _comp("Fj3", 0, POINT, leaf), _comp("Fj1", 0, POINT, leaf),
        _comp("Fy3", 0, POINT, leaf), _comp("Fy1", 0, POINT, leaf),
    )
    zero = EulerProfile("zero")
    fams = [
        TorsionFamily(5, "p", ("Fp",), "Fp", BundleStructure(POINT, zero)),
        TorsionFamily(5, "w", ("Fw",), "Fw", BundleStructure(POINT, zero)),
        TorsionFamily(3, "big", ("Fbig",), "Fbig", BundleStructure(POINT, zero)),
        # line bundles over the non-fixed core spheres joining F'_j to F_p and F'_y to F_w
        TorsionFamily(3, "jp", ("Fj'", "Fp"), "Fj'", BundleStructure(SPHERE2, zero), "flexible"),
        TorsionFamily(3, "yw", ("Fy'", "Fw"), "Fy'", BundleStructure(SPHERE2, zero), "flexible"),
    ]
    for cid in ("Fj3", "Fj1", "Fy3", "Fy1"):
        fams.append(TorsionFamily(3, cid, (cid,), cid, BundleStructure(POINT, zero)))
    return ManifoldSpec("S32", 4, comps, tuple(fams), 2, IntersectionForm(), (UnitKilledByPillar(1),))


# -- Higgs moduli ----------------------------------------------------------------------

def cotangent_torus(g: int) -> ManifoldSpec:
    """T*T^{2g}: rank-one Higgs moduli; the filtration jumps straight to everything at 1."""
    comps = (_comp(f"T{2 * g}", g, torus(2 * g), {0: g, 1: g}),)
    return ManifoldSpec(f"TT{2 * g}", 2 * g, comps, (), None, IntersectionForm("zero"),
                        (FiltrationFullAt(Fraction(1)),))


def higgs_sl2_g2() -> ManifoldSpec:
    comps = (
        _comp("F0", 3, {0: 1, 2: 1, 3: 4, 4: 1, 6: 1}, {0: 3, 1: 3}),
        _comp("F1", 1, {0: 1, 1: 34, 2: 1}, {-1: 2, 0: 1, 1: 1, 2: 2}),
    )
    fams = (TorsionFamily(2, "F1", ("F1",), "F1",
                          BundleStructure(GradedRanks.of({0: 1, 1: 34, 2: 1}), EulerProfile("zero"))),)
    return ManifoldSpec("HiggsSL2g2", 6, comps, fams, None, IntersectionForm("zero"),
                        (FiltrationFullAt(Fraction(1)),))


AFFINE_ARMS = {"A0": (), "D4": (1, 1, 1, 1), "E6": (2, 2, 2), "E7": (1, 3, 3), "E8": (1, 2, 5)}
AFFINE_GROUP = {"A0": "0", "D4": "Z/2", "E6": "Z/3", "E7": "Z/4", "E8": "Z/6"}


def parabolic_higgs_spec(affine: str) -> ManifoldSpec:
    """Two-dimensional parabolic Higgs moduli whose core is an affine Dynkin graph of curves."""
    affine = affine.upper().lstrip("~")
    if affine not in AFFINE_ARMS:
        raise UnsupportedInput(f"unknown affine type {affine!r}")
    name = f"ParabolicHiggs_{affine}"
    if affine == "A0":
        return weight1_tree(name, (), root_betti={0: 1, 1: 2, 2: 1}, csr_weight=None,
                            form=IntersectionForm("zero"), constraints=(FiltrationFullAt(Fraction(1)),))
    return weight1_tree(name, AFFINE_ARMS[affine], csr_weight=None,
                        form=IntersectionForm("kernel_rank", 1),
                        constraints=(BlockTopClass(Fraction(1), 0),))


# -- affine Dynkin data ---------------------------------------------------------------------

def affine_adjacency(affine: str) -> list[list[int]]:
    """Adjacency matrix of the star-shaped affine graph (branch vertex first)."""
    affine = affine.upper().lstrip("~")
    if affine == "A0":
        return [[2]]  # one vertex with a loop
    arms = AFFINE_ARMS[affine]
    size = 1 + sum(arms)
    A = [[0] * size for _ in range(size)]
    idx = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            A[prev][idx] = A[idx][prev] = 1
            prev = idx
            idx += 1
    return A


def imaginary_root(affine: str) -> list[int]:
    """Minimal positive integer generator of the kernel of the Cartan matrix 2I - A."""
    import sympy

    A = sympy.Matrix(affine_adjacency(affine))
    C = 2 * sympy.eye(A.rows) - A
    null = C.nullspace()
    if len(null) != 1:
        raise UnsupportedInput(f"Cartan matrix of {affine} has kernel of dimension {len(null)}")
    v = null[0]
    den = math.lcm(*[int(sympy.fraction(x)[1]) for x in v])
    v = v * den
    g = math.gcd(*[int(x) for x in v])
    vals = [int(x) // g for x in v]
    if vals[0] < 0:
        vals = [-x for x in vals]
    return vals


def imaginary_root_check(affine: str, report) -> list:
    """The k-th step of the H^2 filtration has rank #{i : n_i <= k}."""
    from .model import Diagnostic

    n = imaginary_root(affine)
    expected = [sum(1 for x in n if x <= k) for k in range(1, max(n) + 1)]
    steps = []
    for p in report.periods:
        lo, hi = report.interval(p, 2)
        if lo != hi:
            return [Diagnostic("imaginary-root", affine, f"H^2 rank at {p} is not determined: [{lo}, {hi}]")]
        if lo and (not steps or lo != steps[-1]):
            steps.append(lo)
    if steps != expected:
        return [Diagnostic("imaginary-root", affine,
                           f"H^2 steps {steps} differ from the imaginary root counts {expected}")]
    return []


# -- attraction graphs ----------------------------------------------------------------------

@dataclass(frozen=True)
class AttractionGraph:
    """Flowlines between fixed components, each edge labelled by the weight of its sphere.

    Edges point from the component where the sphere's weight is negative to
    the one where it is positive. Decorations (component, m) record outer
    Z/m torsion lines leaving a component.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]
    decorations: tuple[tuple[str, int], ...] = ()

    def digraph(self):
        import networkx as nx

        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for a, b, w in self.edges:
            g.add_edge(a, b, weight=w)
        return g

    def check(self, spec: ManifoldSpec) -> list:
        import networkx as nx
        from .model import Diagnostic

        g = self.digraph()
        out = []
        if self.vertices and not nx.is_weakly_connected(g):
            out.append(Diagnostic("attraction-graph", spec.name, "graph is not connected"))
        if not nx.is_directed_acyclic_graph(g):
            out.append(Diagnostic("attraction-graph", spec.name, "graph has a directed cycle"))
        fams = {(f.min_member, f.m) for f in spec.families if len(f.members) == 1}
        for cid, m in self.decorations:
            if (cid, m) not in fams:
                out.append(Diagnostic("attraction-graph", cid, f"decoration Z/{m} has no torsion family"))
        for cid, m in sorted(fams - set(self.decorations)):
            out.append(Diagnostic("attraction-graph", cid, f"torsion family Z/{m} is not a decoration"))
        # every leaf with a leftover positive weight w > 1 must carry Z/m for each m | w
        for v in self.vertices:
            c = spec.component(v)
            used = [w for a, b, w in self.edges if b == v]
            free = [k for k, h in c.weights.nonzero if k > 1 for _ in range(h)]
            for w in used:
                if w in free:
                    free.remove(w)
            for w in free:
                for m in _divisors(w):
                    if (v, m) not in self.decorations:
                        out.append(Diagnostic("attraction-graph", v, f"outer weight {w} lacks a Z/{m} decoration"))
        return out


def tree_attraction_graph(spec: ManifoldSpec) -> AttractionGraph:
    """Attraction graph of a weight-1 tree preset or a weight-2 type A chain."""
    ids = [c.id for c in spec.components]
    edges = []
    if "C" in ids:
        for cid in ids:
            if not cid.startswith("q"):
                continue
            arm, j = cid[1:].split("_")
            j = int(j)
            prev = "C" if j == 1 else f"q{arm}_{j - 1}"
            edges.append((cid, prev, j))
    else:
        k = len(ids)
        for j in range(k - 1):
            w = 2 * j - k + 2
            a, b = (f"p{j}", f"p{j + 1}") if w < 0 else (f"p{j + 1}", f"p{j}")
            edges.append((a, b, abs(w)))
    decorations = tuple((f.min_member, f.m) for f in spec.families if len(f.members) == 1)
    return AttractionGraph(tuple(ids), tuple(edges), decorations)


# -- registry ----------------------------------------------------------------------------

def _registry() -> dict:
    reg = {
        "a2_standard": lambda: _renamed(ade_spec("A", 3), "A2_standard"),
        "a2_nonstandard": lambda: _renamed(ade_spec("A", 3, action=(1, 0)), "A2_nonstandard"),
    }
    for k in range(2, 9):
        reg[f"cyclic{k}"] = (lambda k=k: ade_spec("A", k))
    for n in range(4, 9):
        reg[f"d{n}"] = (lambda n=n: ade_spec("D", n))
    for e in ("E6", "E7", "E8"):
        reg[e.lower()] = (lambda e=e: ade_spec(e))
    for m in range(1, 5):
        reg[f"tcp{m}"] = (lambda m=m: cotangent_projective(m))
    for n in (3, 4, 5):
        reg[f"twisted_tcp{n - 1}"] = (lambda n=n: twisted_projective_spec(n))
    reg["springer_gr24"] = lambda: springer_spec("Springer_Gr24", {0: 1, 2: 1, 4: 2, 6: 1, 8: 1})
    reg["springer_fl3"] = lambda: springer_spec("Springer_Fl3", {0: 1, 2: 2, 4: 2, 6: 1})
    reg["s22"] = s22_spec
    reg["s32"] = s32_spec
    for g in (1, 2):
        reg[f"ttorus{2 * g}"] = (lambda g=g: cotangent_torus(g))
    reg["higgs_sl2_g2"] = higgs_sl2_g2
    for a in AFFINE_ARMS:
        reg[f"parabolic_{a.lower()}"] = (lambda a=a: parabolic_higgs_spec(a))
    return reg


def _renamed(spec: ManifoldSpec, name: str) -> ManifoldSpec:
    from dataclasses import replace
    return replace(spec, name=name)


def preset_names() -> list[str]:
    return sorted(_registry())


def get_preset(name: str) -> ManifoldSpec:
    reg = _registry()
    if name not in reg:
        raise KeyError(f"unknown preset {name!r}")
    return reg[name]()


def static_specs() -> dict[str, ManifoldSpec]:
    return {name: factory() for name, factory in sorted(_registry().items())}
