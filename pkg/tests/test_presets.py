from collections import Counter
from dataclasses import replace

import pytest

import oracles
from floerseq.errors import NotContracting, UnsupportedInput
from floerseq.graded import GradedRanks
from floerseq.model import WeightMultiset, validate_spec
from floerseq.presets import (AFFINE_ARMS, AttractionGraph, ade_spec, affine_adjacency, cotangent_projective,
                              get_preset, imaginary_root, parabolic_higgs_spec, preset_names, static_specs,
                              tree_attraction_graph, twisted_projective_spec)

TREES = [n for n in preset_names() if n.startswith(("cyclic", "d", "e")) or n.startswith("a2")]


def weights_of(spec):
    return sorted(tuple(sorted(c.weights.flat())) for c in spec.components)


def leaf_orders(spec):
    return Counter(f.m for f in spec.families)


def test_registry():
    names = preset_names()
    assert len(names) == len(set(names)) >= 30
    assert set(static_specs()) == set(names)
    with pytest.raises(KeyError):
        get_preset("nope")


@pytest.mark.parametrize("k", range(2, 9))
def test_cyclic_weights_match_closed_form(k):
    got = weights_of(get_preset(f"cyclic{k}"))
    assert got == [tuple(sorted(w)) for w in oracles.cyclic_weights(k)]


def test_cyclic_leaves():
    assert leaf_orders(get_preset("cyclic5")) == {5: 2}
    assert leaf_orders(get_preset("cyclic6")) == {3: 2}
    assert leaf_orders(get_preset("cyclic8")) == {2: 2, 4: 2}


def test_d_and_e_leaves():
    assert leaf_orders(get_preset("e6")) == {2: 1, 3: 2}
    assert leaf_orders(get_preset("e7")) == {2: 2, 3: 1, 4: 1}
    assert leaf_orders(get_preset("e8")) == {2: 1, 3: 1, 5: 1}
    for n in range(4, 9):
        spec = get_preset(f"d{n}")
        # the two short arms end in Z/2 lines, the long arm in Z/(n - 2)
        top = Counter()
        for cid in {f.min_member for f in spec.families}:
            top[max(f.m for f in spec.families if f.min_member == cid)] += 1
        assert top == Counter([2, 2, n - 2])


def test_ade_errors():
    with pytest.raises(UnsupportedInput):
        ade_spec("A", 1)
    with pytest.raises(UnsupportedInput):
        ade_spec("A", 4, action=(1, 2))
    with pytest.raises(UnsupportedInput):
        ade_spec("D", 3)
    with pytest.raises(UnsupportedInput):
        ade_spec("E6", action=(0, 1))
    with pytest.raises(UnsupportedInput):
        ade_spec("F4")


def test_nonstandard_a2():
    spec = get_preset("a2_nonstandard")
    assert weights_of(spec) == [(-1, 2), (0, 1)]
    assert [(f.m, f.min_member) for f in spec.families] == [(2, "q1_1")]


def test_twisted_projective_line():
    spec = twisted_projective_spec(2)
    assert {c.id: c.weights.as_dict() for c in spec.components} == {"F0": {1: 2}, "F1": {-1: 1, 3: 1}}
    assert [(f.m, f.members) for f in spec.families] == [(3, ("F1",))]
    assert validate_spec(spec) == []


def test_twisted_projective_errors():
    with pytest.raises(NotContracting):
        twisted_projective_spec(3, [0, 2, 4], 3)
    with pytest.raises(UnsupportedInput):
        twisted_projective_spec(3, [0, 1])
    with pytest.raises(UnsupportedInput):
        twisted_projective_spec(1)


@pytest.mark.parametrize("m", range(1, 5))
def test_cotangent_projective(m):
    spec = cotangent_projective(m)
    (c,) = spec.components
    assert c.dimc == m and c.weights.as_dict() == {0: m, 1: m}
    assert spec.families == ()


@pytest.mark.parametrize("affine,root", [
    ("A0", [1]),
    ("D4", [2, 1, 1, 1, 1]),
    ("E6", [3, 2, 1, 2, 1, 2, 1]),
    ("E7", [4, 2, 3, 2, 1, 3, 2, 1]),
    ("E8", [6, 3, 4, 2, 5, 4, 3, 2, 1]),
])
def test_imaginary_roots(affine, root):
    assert imaginary_root(affine) == root
    A = affine_adjacency(affine)
    # the root is in the kernel of the Cartan matrix
    assert all(2 * root[i] - sum(A[i][j] * root[j] for j in range(len(root))) == 0 for i in range(len(root)))


def test_imaginary_root_multiset_for_e8():
    assert sorted(imaginary_root("E8")) == sorted([1, 2, 3, 4, 5, 6, 4, 2, 3])
    with pytest.raises(UnsupportedInput):
        parabolic_higgs_spec("B3")
    assert set(AFFINE_ARMS) == {"A0", "D4", "E6", "E7", "E8"}


@pytest.mark.parametrize("name", TREES)
def test_attraction_graphs(name):
    spec = get_preset(name)
    g = tree_attraction_graph(spec)
    assert g.check(spec) == []
    assert len(g.edges) == len(g.vertices) - 1


def test_attraction_graph_problems():
    spec = get_preset("cyclic5")
    g = tree_attraction_graph(spec)
    assert g.edges == (("p0", "p1", 3), ("p1", "p2", 1), ("p3", "p2", 1), ("p4", "p3", 3))
    loop = replace(g, edges=g.edges + (("p2", "p0", 1),))
    assert [d.message for d in loop.check(spec)] == ["graph has a directed cycle"]
    split = replace(g, edges=g.edges[:2])
    assert "graph is not connected" in [d.message for d in split.check(spec)]
    bare = replace(g, decorations=g.decorations[:1])
    msgs = [d.message for d in bare.check(spec)]
    assert "torsion family Z/5 is not a decoration" in msgs
    assert "outer weight 5 lacks a Z/5 decoration" in msgs
    extra = AttractionGraph(g.vertices, g.edges, g.decorations + (("p2", 7),))
    assert [d.message for d in extra.check(spec)] == ["decoration Z/7 has no torsion family"]


def test_presets_are_fresh_objects():
    a = get_preset("s32")
    b = replace(a, components=a.components[:1])
    assert len(get_preset("s32").components) == 10 and len(b.components) == 1
    assert get_preset("s32").component("Fmin").weights == WeightMultiset.of([1, 1, 1, 1])
    assert get_preset("springer_gr24").components[0].betti == GradedRanks.of({0: 1, 2: 1, 4: 2, 6: 1, 8: 1})
