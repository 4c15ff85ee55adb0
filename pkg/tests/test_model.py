from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from floerseq.graded import EulerProfile, GradedRanks
from floerseq.model import (BundleStructure, ExplicitStructure, FiltrationFullAt, FixedComponent,
                            ManifoldSpec, TorsionFamily, UnitKilledByPillar, WeightMultiset,
                            bundle_rank, family_rank, minimum_component, torsion_coverage_notices,
                            total_cohomology, validate_spec)
from floerseq.presets import get_preset, preset_names

G = GradedRanks.of
PT = GradedRanks.point()


def comp(cid, weights, dimc=0, betti=PT):
    return FixedComponent(cid, dimc, betti if isinstance(betti, GradedRanks) else G(betti),
                          WeightMultiset.of(weights))


def line(m, cid):
    return TorsionFamily(m, cid, (cid,), cid, BundleStructure(PT, EulerProfile("zero")))


def a2():
    return get_preset("a2_standard")


def codes(spec):
    return [d.code for d in validate_spec(spec)]


def test_weight_multiset():
    w = WeightMultiset.of([0, 3, -1, 3])
    assert w.zero_mult == 1 and w.h(3) == 2 and w.h(5) == 0 and w.total() == 4
    assert w.flat() == [0, -1, 3, 3]
    assert w.as_dict() == {0: 1, -1: 1, 3: 2}
    assert WeightMultiset.of({2: 1, -1: 1}) == WeightMultiset.of([-1, 2])
    with pytest.raises(ValueError):
        WeightMultiset(((2, 1), (1, 1)))
    with pytest.raises(ValueError):
        WeightMultiset.of({1: -1})


def test_a2_is_valid():
    assert validate_spec(a2()) == []
    assert minimum_component(a2()).id == "p1"
    assert total_cohomology(a2()).as_dict() == {0: 1, 2: 2}


def test_weight_count_diagnostic():
    spec = replace(a2(), dim=3)
    msgs = [d.message for d in validate_spec(spec) if d.code == "weight-count"]
    assert "weight count 2 ≠ dim 3" in msgs


def test_symplectic_duality_diagnostic():
    # weight 2 pairs h_3 with h_{-1}
    spec = ManifoldSpec("bad", 2, (comp("p", [3, 1]),), (), 2)
    diags = [d for d in validate_spec(spec) if d.code == "symplectic-duality"]
    assert diags and "h_-1" in diags[0].message


@pytest.mark.parametrize("component,code", [
    (comp("c", [0, 1], dimc=0, betti={0: 1, 2: 1}), "zero-weight"),
    (comp("c", [0, 1], dimc=1, betti={0: 1, 1: 1}), "poincare-duality"),
    (comp("c", [0, 1], dimc=1, betti={0: 1, 4: 1}), "betti-support"),
    (comp("c", [0, 1], dimc=1, betti={0: 2, 2: 2}), "connected"),
])
def test_component_diagnostics(component, code):
    spec = ManifoldSpec("x", 2, (component,))
    assert code in codes(spec)


def test_maslov_diagnostics():
    spec = ManifoldSpec("x", 2, (comp("a", [1, 1]), comp("b", [2, 1])))
    assert "maslov-mismatch" in codes(spec)
    spec = ManifoldSpec("x", 2, (comp("a", [-1, -1]),))
    assert "maslov-positive" in codes(spec)


def test_family_diagnostics():
    base = a2()
    p0 = base.component("p0")
    assert family_rank(base, base.families[0]) == 1
    assert bundle_rank(base, base.families[0]) == 1
    bad = [
        (TorsionFamily(3, "x", ("nope",), "nope", BundleStructure(PT)), "unknown-member"),
        (TorsionFamily(3, "x", ("p0",), "p2", BundleStructure(PT)), "min-member"),
        (TorsionFamily(2, "x", ("p0",), "p0", BundleStructure(PT)), "outer"),
        (TorsionFamily(1, "x", ("p0",), "p0", BundleStructure(PT)), "torsion-order"),
        (TorsionFamily(3, "x", ("p0",), "p0", BundleStructure(G({0: 1, 1: 1}))), "core"),
        (TorsionFamily(3, "x", ("p0",), "p0", BundleStructure(PT), "wobbly"), "vertical-policy"),
        (TorsionFamily(3, "x", ("p0",), "p0", BundleStructure(G({0: 1, 2: 1}))), "bundle-rank"),
        (TorsionFamily(3, "x", ("p0",), "p0", ExplicitStructure(G({0: 1, 1: 1}), ((Fraction(1, 3), 1),))),
         "slice-grading"),
        (TorsionFamily(3, "x", ("p0",), "p0", ExplicitStructure(G({0: 1, 1: 1}), ())), "slice-grading"),
        (base.families[0], "duplicate-family"),
    ]
    for fam, code in bad:
        spec = replace(base, families=base.families + (fam,))
        assert code in codes(spec), code
    assert p0.weights.as_dict() == {-1: 1, 3: 1}


def test_m_minimal_diagnostic():
    # p2 has weight -3, so it cannot be the bottom of a Z/3 family
    base = a2()
    fam = TorsionFamily(3, "x", ("p2",), "p2", BundleStructure(PT))
    wrong = replace(base, components=tuple(replace(c, weights=WeightMultiset.of([-3, 5])) if c.id == "p2"
                                           else c for c in base.components), families=(fam,))
    assert "m-minimal" in codes(wrong)


def test_constraint_hypotheses():
    base = a2()
    assert codes(replace(base, constraints=(UnitKilledByPillar(2),))) == ["constraint"]
    assert codes(replace(get_preset("tcp1"), constraints=(UnitKilledByPillar(1),))) == ["constraint"]
    assert codes(replace(base, constraints=(FiltrationFullAt(Fraction(0)),))) == ["constraint"]


def test_duplicate_components():
    base = a2()
    spec = replace(base, components=base.components + (base.components[0],))
    assert "duplicate-component" in codes(spec)


def test_coverage_notices_are_separate_from_errors():
    spec = ManifoldSpec("x", 2, (comp("a", [-2, 4]),), (line(4, "a"),))
    notes = torsion_coverage_notices(spec)
    assert {d.message.split(" is divisible by ")[1][:1] for d in notes} == {"2"}


@pytest.mark.parametrize("name", preset_names())
def test_presets_validate(name):
    spec = get_preset(name)
    assert validate_spec(spec) == []
    H = total_cohomology(spec)
    if spec.csr_weight is not None:
        # conical resolutions: cohomology in even degrees up to the complex dimension
        assert H.is_even() and H.top() <= spec.dim
        assert H[0] == 1


@pytest.mark.parametrize("name", [n for n in preset_names() if get_preset(n).csr_weight == 1])
def test_weight1_middle_degree_counts_components(name):
    # each fixed component contributes its top class to the middle degree
    spec = get_preset(name)
    assert total_cohomology(spec)[spec.dim] == len(spec.components)


@settings(max_examples=60)
@given(st.permutations(list(range(10))))
def test_total_cohomology_ignores_order(order):
    spec = get_preset("s32")
    comps = tuple(spec.components[i] for i in order)
    assert total_cohomology(replace(spec, components=comps)) == total_cohomology(spec)
