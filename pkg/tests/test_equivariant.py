from dataclasses import replace
from fractions import Fraction as F

import pytest

from floerseq.errors import HypothesisNotMet, MissingQuotientData, NegativeRank
from floerseq.graded import GradedRanks
from floerseq.model import ExplicitStructure
from floerseq.equivariant import (assemble_equivariant_page, check_collapse, eq27_identity,
                                  equivariant_column, equivariant_filtration_bounds, pillar_column,
                                  solve_equivariant_slice)
from floerseq.page import assemble_e1, required_window
from floerseq.presets import get_preset, preset_names
from floerseq.solver import solve_filtration

CONICAL = [n for n in preset_names() if get_preset(n).csr_weight]


def with_copies(spec, k):
    f = spec.families[0]
    return replace(spec, families=spec.families + tuple(replace(f, id=f"copy{i}") for i in range(k)))


def test_a2_columns():
    a2 = get_preset("a2_standard")
    f = a2.families[0]
    assert equivariant_column(a2, f, F(1, 3)).as_dict() == {1: 1}
    assert equivariant_column(a2, f, F(2, 3)).as_dict() == {-1: 1}
    assert pillar_column(a2, 1).as_dict() == {-3: 1, -1: 1}
    page = assemble_equivariant_page(a2, F(4, 3))
    assert [(str(c.period), c.ranks.as_dict()) for c in page.columns] == [
        ("0", {0: 1, 2: 2}), ("1/3", {1: 2}), ("2/3", {-1: 2}), ("1", {-3: 1, -1: 1}), ("4/3", {-3: 2})]
    assert check_collapse(a2, page) == []


@pytest.mark.parametrize("name,want", [
    ("a2_standard", {1: 1, 3: 1}),
    ("tcp1", {1: 1, 3: 1}),
    ("tcp2", {1: 1, 3: 2, 5: 2, 7: 1}),
    ("s22", {1: 1, 3: 4, 5: 4, 7: 1}),
    ("s32", {1: 1, 3: 5, 5: 5, 7: 1}),
])
def test_equivariant_slice_values(name, want):
    assert solve_equivariant_slice(get_preset(name)).as_dict() == want


def test_tcp1_pillar_moves_by_twice_the_maslov_index():
    tcp1 = get_preset("tcp1")
    assert pillar_column(tcp1, 1).as_dict() == {-1: 1, 1: 1}
    assert pillar_column(tcp1, 3, GradedRanks.of({1: 1})).as_dict() == {-5: 1}


@pytest.mark.parametrize("name", CONICAL)
def test_collapse_and_identity_on_conical_presets(name):
    spec = get_preset(name)
    assert check_collapse(spec, assemble_equivariant_page(spec, 2)) == []
    assert eq27_identity(spec) == []


def test_identity_needs_a_conical_weight():
    with pytest.raises(HypothesisNotMet):
        eq27_identity(get_preset("ttorus2"))


def test_inconsistent_families_are_caught():
    a2 = get_preset("a2_standard")
    # one extra copy still solves, but the balance then fails
    assert [d.code for d in eq27_identity(with_copies(a2, 1))][0] == "eq-identity"
    with pytest.raises(NegativeRank):
        solve_equivariant_slice(with_copies(a2, 2))
    assert [d.code for d in eq27_identity(with_copies(a2, 2))] == ["eq-slice"]


def test_explicit_structure_needs_quotient_data():
    a2 = get_preset("a2_standard")
    f = a2.families[0]
    ex = replace(f, structure=ExplicitStructure(GradedRanks.of({0: 1, 1: 1}), ((F(1, 3), 0), (F(2, 3), -2))))
    with pytest.raises(MissingQuotientData):
        equivariant_column(replace(a2, families=(ex,) + a2.families[1:]), ex, F(1, 3))
    ex = replace(ex, structure=replace(ex.structure, quotient_betti=GradedRanks.point()))
    assert equivariant_column(replace(a2, families=(ex,) + a2.families[1:]), ex, F(1, 3)).as_dict() == {1: 1}


def test_a2_bounds():
    rep = equivariant_filtration_bounds(get_preset("a2_standard"))
    assert rep.mode == "equivariant"
    assert rep.interval(F(1, 3), 2) == (2, 2)
    assert rep.interval(F(2, 3), 0) == (0, 1)
    assert rep.interval(1, 0) == (1, 1)


def test_u_rule_sharpens_the_unit():
    for name in ("a2_nonstandard", "cyclic4"):
        spec = get_preset(name)
        assert equivariant_filtration_bounds(spec).interval(1, 0) == (0, 1)
        sharp = equivariant_filtration_bounds(spec, u_rule=True)
        assert sharp.interval(1, 0) == (0, 0)
        assert any(n.startswith("u-rule") for n in sharp.notes)
    rep = equivariant_filtration_bounds(get_preset("a2_nonstandard"), u_rule=True)
    assert rep.interval(1, 2) == (2, 2)
    # the CP^1 pillar of T*CP^1 is itself a projectivised quotient, so the unit waits for N = 2
    rep = equivariant_filtration_bounds(get_preset("tcp1"), u_rule=True)
    assert rep.interval(1, 0) == (0, 0) and rep.interval(2, 0) == (1, 1)


def test_s32_bounds_keep_the_open_cell():
    rep = equivariant_filtration_bounds(get_preset("s32"))
    assert rep.interval(F(1, 3), 2) == (2, 4)


@pytest.mark.parametrize("name", ["a2_standard", "a2_nonstandard", "cyclic4", "s22", "s32", "tcp1", "tcp2", "d5"])
def test_equivariant_intervals_contain_the_exact_ones(name):
    spec = get_preset(name)
    eq = equivariant_filtration_bounds(spec)
    rep = solve_filtration(spec, assemble_e1(spec, required_window(spec)), ())
    for p in eq.periods:
        if p not in rep.periods:
            continue
        for d, _ in eq.total:
            lo, hi = eq.interval(p, d)
            a, b = rep.interval(p, d)
            assert lo <= a and b <= hi, (p, d)
