import json
from pathlib import Path

import pytest

import floerseq.cli as cli
from floerseq.cli import dump_spec, load_spec, main, parse_spec, render, spec_to_json
from floerseq.errors import CrossCheckFailure, SpecParseError
from floerseq.page import assemble_e1
from floerseq.presets import get_preset, preset_names
from floerseq.solver import solve_filtration

ROOT = Path(__file__).resolve().parents[1]


def tcp1_doc():
    return json.loads((ROOT / "corpus" / "tcp1.json").read_text())


@pytest.mark.parametrize("edit,path", [
    (lambda d: d.pop("dim"), "$.dim"),
    (lambda d: d.update(extra=1), "$.extra"),
    (lambda d: d.update(dim="2"), "$.dim"),
    (lambda d: d["components"][0].update(dimc=-1), "$.components[0].dimc"),
    (lambda d: d["components"][0]["betti"].update({"x": 1}), "$.components[0].betti.x"),
    (lambda d: d["components"][0]["betti"].update({"99": 1}), "$.components[0].betti.99"),
    (lambda d: d["components"][0]["weights"].update({"0": 3}), "$.components[0].weights.0"),
    (lambda d: d.update(intersection_form="odd"), "$.intersection_form"),
    (lambda d: d.update(slice="guess"), "$.slice"),
    (lambda d: d.update(constraints=[{"nope": 1}]), "$.constraints[0].nope"),
    (lambda d: d.update(constraints=[{"unit_killed_by_pillar": 1, "x": 2}]), "$.constraints[0]"),
    (lambda d: d.update(torsion_families={}), "$.torsion_families"),
], ids=["missing", "unknown-key", "string-dim", "negative-dimc", "degree-key", "degree-bound", "zero-weight",
        "form", "slice", "constraint-kind", "constraint-keys", "families-type"])
def test_parse_errors_carry_a_path(edit, path):
    doc = tcp1_doc()
    edit(doc)
    with pytest.raises(SpecParseError) as err:
        parse_spec(doc)
    assert err.value.path == path


def test_zero_weight_message():
    doc = tcp1_doc()
    doc["components"][0]["weights"]["0"] = 0
    with pytest.raises(SpecParseError, match="zero weight must be dimc"):
        parse_spec(doc)


def test_bad_json_and_bytes():
    with pytest.raises(SpecParseError, match="invalid JSON"):
        parse_spec("{")
    assert parse_spec(json.dumps(tcp1_doc()).encode()) == get_preset("tcp1")


@pytest.mark.parametrize("name", preset_names())
def test_round_trip(name):
    spec = get_preset(name)
    text = dump_spec(spec)
    assert parse_spec(text) == spec
    assert dump_spec(parse_spec(text)) == text
    assert spec_to_json(spec)["name"] == spec.name


def test_render_formats():
    spec = get_preset("a2_standard")
    page = assemble_e1(spec, 1)
    ascii_ = render(page, "ascii", spec.dim)
    assert "H^*(Y)" in ascii_ or "H*(Y)" in ascii_
    assert render(page, "latex").startswith("\\begin{tabular}")
    data = json.loads(render(page, "json"))
    assert data["columns"][0]["period"] == "0"
    csv = render(page, "csv").splitlines()
    assert csv[0].startswith("period") and len(csv) > 3
    rep = solve_filtration(spec, page)
    assert "0 ⊂ F_{1/3} = K_2^2 ⊂ F_1 = K_0 ⊕ K_2^2 = H*(Y)" in render(rep)
    assert render(rep, "csv").splitlines()[1] == "1/3,0,0,0"
    assert json.loads(render(rep, "json"))["mode"] == "exact"
    assert json.loads(render(spec, "json")) == spec_to_json(spec)
    with pytest.raises(ValueError):
        render(page, "html")
    with pytest.raises(ValueError):
        render(spec, "ascii")
    with pytest.raises(TypeError):
        render(3)


def test_validate_exit_codes(tmp_path, capsys):
    assert main(["validate", "a2_standard"]) == 0
    assert "A2_standard: ok" in capsys.readouterr().out
    doc = tcp1_doc()
    doc["components"][0]["weights"] = {"1": 2}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["validate", str(bad)]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{\"name\": 1}")
    assert main(["validate", str(broken)]) == 2
    assert "parse error" in capsys.readouterr().err
    assert main(["validate", "no_such_thing"]) == 2


def test_cross_check_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise CrossCheckFailure("gradings disagree")

    monkeypatch.setattr("floerseq.page.assemble_e1", boom)
    assert main(["e1", "a2_standard"]) == 3
    assert "cross-check failure" in capsys.readouterr().err


def test_e1_latex(capsys):
    assert main(["e1", str(ROOT / "corpus" / "tcp1.json"), "--window", "2", "--format", "latex"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("\\begin{tabular}{r|ccc}")
    assert "$-4$ &  &  & $1$ \\\\" in out
    assert main(["e1", "tcp1", "--window", "two"]) == 2


def test_filtration_and_equivariant(capsys):
    assert main(["filtration", "s32", "--format", "csv"]) == 0
    assert "1/3,2,2,4" in capsys.readouterr().out
    assert main(["equivariant", "a2_nonstandard", "--u-rule"]) == 0
    out = capsys.readouterr().out
    assert "equivariant slice ranks: {1: 1, 3: 1}" in out
    assert "note: u-rule" in out
    assert main(["equivariant", "tcp1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["columns"]


def test_verify(capsys):
    assert main(["verify", "--corpus"]) == 0
    out = capsys.readouterr().out
    assert f"{len(preset_names())}/{len(preset_names())} specs clean" in out
    assert main(["verify", "s22"]) == 0
    assert main(["verify"]) == 2


def test_presets_emit_matches_the_shipped_corpus(tmp_path, capsys):
    assert main(["presets"]) == 0
    assert capsys.readouterr().out.split() == preset_names()
    assert main(["presets", "--emit", str(tmp_path)]) == 0
    for p in sorted((ROOT / "corpus").glob("*.json")):
        assert (tmp_path / p.name).read_bytes() == p.read_bytes(), p.name
    assert sorted(x.name for x in tmp_path.iterdir()) == sorted(x.name for x in cli.corpus_dir().iterdir())
    assert load_spec(tmp_path / "s32.json") == get_preset("s32")
