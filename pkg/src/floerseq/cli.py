"""JSON schema, table rendering and the ``floerseq`` command line."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CrossCheckFailure, FloerSeqError, SpecParseError
from .graded import EulerProfile, GradedRanks, IntersectionForm
from .index import format_period, maslov_index
from .model import (BlockTopClass, BundleStructure, Diagnostic, ExplicitStructure, FiltrationFullAt,
                    FixedComponent, ManifoldSpec, TorsionFamily, UnitKilledByPillar, UnstableOnly,
                    WeightMultiset)
from .page import E1Page
from .solver import FiltrationReport

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_PARSE, EXIT_CROSSCHECK = 0, 1, 2, 3

_INT = re.compile(r"-?\d+\Z")
_PERIOD = re.compile(r"-?\d+(/\d+)?\Z")


# -- parsing --------------------------------------------------------------------------

def _keys(obj, path: str, required: tuple, optional: tuple = ()) -> None:
    if not isinstance(obj, dict):
        raise SpecParseError(path, "expected an object")
    for k in required:
        if k not in obj:
            raise SpecParseError(f"{path}.{k}", "missing required key")
    for k in obj:
        if k not in required and k not in optional:
            raise SpecParseError(f"{path}.{k}", "unknown key")


def _int(v, path: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecParseError(path, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise SpecParseError(path, f"expected an integer >= {minimum}, got {v}")
    return v


def _str(v, path: str) -> str:
    if not isinstance(v, str) or not v:
        raise SpecParseError(path, f"expected a nonempty string, got {v!r}")
    return v


def _degree_key(k: str, path: str) -> int:
    if not _INT.match(k):
        raise SpecParseError(f"{path}.{k}", "keys must be decimal integers")
    return int(k)


def _ranks(obj, path: str, bound: int) -> GradedRanks:
    if not isinstance(obj, dict):
        raise SpecParseError(path, "expected an object of degree -> rank")
    acc = {}
    for k, v in obj.items():
        d = _degree_key(k, path)
        if abs(d) > bound:
            raise SpecParseError(f"{path}.{k}", f"degree {d} is outside [-{bound}, {bound}]")
        acc[d] = _int(v, f"{path}.{k}", 0)
    return GradedRanks.of(acc)


def _period(v, path: str) -> Fraction:
    if not isinstance(v, str) or not _PERIOD.match(v):
        raise SpecParseError(path, f"periods are strings 'k/m' or 'N', got {v!r}")
    try:
        return Fraction(v)
    except ZeroDivisionError:
        raise SpecParseError(path, "zero denominator") from None


def _form(v, path: str) -> IntersectionForm:
    if v in ("nondegenerate", "zero"):
        return IntersectionForm(v)
    if isinstance(v, dict):
        _keys(v, path, ("kernel_rank",))
        return IntersectionForm("kernel_rank", _int(v["kernel_rank"], f"{path}.kernel_rank", 0))
    raise SpecParseError(path, f"expected 'nondegenerate', 'zero' or {{'kernel_rank': k}}, got {v!r}")


def _component(obj, path: str, bound: int) -> FixedComponent:
    _keys(obj, path, ("id", "dimc", "betti", "weights"))
    dimc = _int(obj["dimc"], f"{path}.dimc", 0)
    w = obj["weights"]
    if not isinstance(w, dict):
        raise SpecParseError(f"{path}.weights", "expected an object of weight -> multiplicity")
    acc = {}
    for k, v in w.items():
        key = _degree_key(k, f"{path}.weights")
        mult = _int(v, f"{path}.weights.{k}", 0)
        if key == 0 and mult != dimc:
            raise SpecParseError(f"{path}.weights.{k}", "zero weight must be dimc")
        acc[key] = mult
    acc[0] = dimc
    return FixedComponent(_str(obj["id"], f"{path}.id"), dimc, _ranks(obj["betti"], f"{path}.betti", bound),
                          WeightMultiset.of(acc))


def _euler(v, path: str, bound: int) -> EulerProfile:
    if v in ("zero", "full"):
        return EulerProfile(v)
    if isinstance(v, dict):
        _keys(v, path, ("explicit",))
        return EulerProfile("explicit", _ranks(v["explicit"], f"{path}.explicit", bound))
    raise SpecParseError(path, f"expected 'zero', 'full' or {{'explicit': ...}}, got {v!r}")


def _structure(obj, path: str, bound: int):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SpecParseError(path, "expected exactly one of 'bundle' or 'explicit'")
    (kind, body), = obj.items()
    p = f"{path}.{kind}"
    if kind == "bundle":
        _keys(body, p, ("core_betti",), ("euler",))
        return BundleStructure(_ranks(body["core_betti"], f"{p}.core_betti", bound),
                               _euler(body.get("euler", "full"), f"{p}.euler", bound))
    if kind == "explicit":
        _keys(body, p, ("slice_betti", "slice_grading"), ("quotient_betti", "default_grading"))
        sg = body["slice_grading"]
        if not isinstance(sg, dict):
            raise SpecParseError(f"{p}.slice_grading", "expected an object of period -> grading")
        grading = tuple(sorted((_period(k, f"{p}.slice_grading.{k}"), _int(v, f"{p}.slice_grading.{k}"))
                               for k, v in sg.items()))
        q = body.get("quotient_betti")
        dg = body.get("default_grading")
        return ExplicitStructure(_ranks(body["slice_betti"], f"{p}.slice_betti", bound), grading,
                                 None if q is None else _ranks(q, f"{p}.quotient_betti", bound),
                                 None if dg is None else _int(dg, f"{p}.default_grading"))
    raise SpecParseError(p, "unknown structure kind")


def _family(obj, path: str, bound: int) -> TorsionFamily:
    _keys(obj, path, ("m", "id", "members", "min", "structure"), ("vertical",))
    members = obj["members"]
    if not isinstance(members, list) or not members:
        raise SpecParseError(f"{path}.members", "expected a nonempty list of component ids")
    vertical = obj.get("vertical")
    if vertical not in (None, "rigid", "flexible"):
        raise SpecParseError(f"{path}.vertical", f"expected 'rigid' or 'flexible', got {vertical!r}")
    return TorsionFamily(_int(obj["m"], f"{path}.m", 2), _str(obj["id"], f"{path}.id"),
                         tuple(_str(x, f"{path}.members[{i}]") for i, x in enumerate(members)),
                         _str(obj["min"], f"{path}.min"), _structure(obj["structure"], f"{path}.structure", bound),
                         vertical)


def _constraint(obj, path: str):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SpecParseError(path, "a constraint is an object with exactly one key")
    (kind, v), = obj.items()
    p = f"{path}.{kind}"
    if kind == "unit_killed_by_pillar":
        return UnitKilledByPillar(_int(v, p, 1))
    if kind == "filtration_full_at":
        return FiltrationFullAt(_period(v, p))
    if kind == "unstable_only":
        if not isinstance(v, bool):
            raise SpecParseError(p, "expected true or false")
        return UnstableOnly(v)
    if kind == "block_top_class":
        _keys(v, p, ("column", "forbidden_target_degree"))
        return BlockTopClass(_period(v["column"], f"{p}.column"),
                             _int(v["forbidden_target_degree"], f"{p}.forbidden_target_degree"))
    raise SpecParseError(p, "unknown constraint")


def parse_spec(document) -> ManifoldSpec:
    """Build a spec from a JSON string, bytes or an already-decoded object."""
    if isinstance(document, (bytes, bytearray)):
        document = document.decode("utf-8")
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecParseError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    _keys(document, "$", ("name", "dim", "components"),
          ("csr_weight", "intersection_form", "torsion_families", "constraints", "slice"))
    dim = _int(document["dim"], "$.dim", 1)
    return _parse_body(document, dim)


def _parse_body(document: dict, dim: int) -> ManifoldSpec:
    bound = 4 * dim  # catches typos in degree keys
    comps = document["components"]
    if not isinstance(comps, list):
        raise SpecParseError("$.components", "expected a list")
    fams = document.get("torsion_families", [])
    if not isinstance(fams, list):
        raise SpecParseError("$.torsion_families", "expected a list")
    cons = document.get("constraints", [])
    if not isinstance(cons, list):
        raise SpecParseError("$.constraints", "expected a list")
    csr = document.get("csr_weight")
    sl = document.get("slice", "derived")
    if sl == "derived":
        slice_betti = None
    elif isinstance(sl, dict):
        _keys(sl, "$.slice", ("explicit",))
        slice_betti = _ranks(sl["explicit"], "$.slice.explicit", bound)
    else:
        raise SpecParseError("$.slice", f"expected 'derived' or {{'explicit': ...}}, got {sl!r}")
    return ManifoldSpec(
        _str(document["name"], "$.name"),
        dim,
        tuple(_component(c, f"$.components[{i}]", bound) for i, c in enumerate(comps)),
        tuple(_family(f, f"$.torsion_families[{i}]", bound) for i, f in enumerate(fams)),
        None if csr is None else _int(csr, "$.csr_weight", 1),
        _form(document.get("intersection_form", "nondegenerate"), "$.intersection_form"),
        tuple(_constraint(c, f"$.constraints[{i}]") for i, c in enumerate(cons)),
        slice_betti,
    )


def load_spec(path) -> ManifoldSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise SpecParseError("$", "document is not UTF-8") from None
    return parse_spec(text)


# -- serialisation ------------------------------------------------------------------

def _ranks_json(g: GradedRanks) -> dict:
    return {str(d): r for d, r in g}


def _euler_json(e: EulerProfile):
    return e.kind if e.kind != "explicit" else {"explicit": _ranks_json(e.ranks)}


def _structure_json(st) -> dict:
    if isinstance(st, BundleStructure):
        return {"bundle": {"core_betti": _ranks_json(st.core_betti), "euler": _euler_json(st.euler)}}
    body = {"slice_betti": _ranks_json(st.slice_betti),
            "slice_grading": {format_period(p): g for p, g in sorted(st.slice_grading)}}
    if st.quotient_betti is not None:
        body["quotient_betti"] = _ranks_json(st.quotient_betti)
    if st.default_grading is not None:
        body["default_grading"] = st.default_grading
    return {"explicit": body}


def _constraint_json(c) -> dict:
    if isinstance(c, UnitKilledByPillar):
        return {"unit_killed_by_pillar": c.N}
    if isinstance(c, FiltrationFullAt):
        return {"filtration_full_at": format_period(c.period)}
    if isinstance(c, UnstableOnly):
        return {"unstable_only": c.enabled}
    return {"block_top_class": {"column": format_period(c.column),
                                "forbidden_target_degree": c.forbidden_target_degree}}


def spec_to_json(spec: ManifoldSpec) -> dict:
    form = spec.intersection_form
    doc = {"name": spec.name, "dim": spec.dim}
    if spec.csr_weight is not None:
        doc["csr_weight"] = spec.csr_weight
    doc["intersection_form"] = form.kind if form.kind != "kernel_rank" else {"kernel_rank": form.kernel}
    doc["components"] = [
        {"id": c.id, "dimc": c.dimc, "betti": _ranks_json(c.betti),
         "weights": {str(k): h for k, h in c.weights.nonzero}}
        for c in spec.components]
    fams = []
    for f in spec.families:
        item = {"m": f.m, "id": f.id, "members": list(f.members), "min": f.min_member,
                "structure": _structure_json(f.structure)}
        if f.vertical_policy is not None:
            item["vertical"] = f.vertical_policy
        fams.append(item)
    doc["torsion_families"] = fams
    doc["constraints"] = [_constraint_json(c) for c in spec.constraints]
    doc["slice"] = "derived" if spec.slice_betti is None else {"explicit": _ranks_json(spec.slice_betti)}
    return doc


def dump_spec(spec: ManifoldSpec) -> str:
    return json.dumps(spec_to_json(spec), indent=2, ensure_ascii=False) + "\n"


# -- tables ------------------------------------------------------------------------

@dataclass(frozen=True)
class RenderedTable:
    headers: tuple[str, ...]
    rows: tuple[tuple[int, tuple[int, ...]], ...]  # (total degree, ranks per column)
    footer: str = ""


def page_table(page: E1Page, dim: int | None = None) -> RenderedTable:
    periods = [c.period for c in page.columns if c.period > 0]
    has_zero = page.column(0) is not None
    headers = (["H*(Y)"] if has_zero else []) + [f"H*(B_{format_period(p)})[-mu]" for p in periods]
    degs = sorted(page.degrees(), reverse=True)
    order = ([Fraction(0)] if has_zero else []) + periods
    rows = tuple((d, tuple(page.rank(p, d) for p in order)) for d in degs)
    footer = ""
    if dim is not None:
        footer = f"columns T and 1-T mirror under d -> {2 * dim - 1 - 2 * page.maslov} - d"
    return RenderedTable(tuple(headers), rows, footer)


def _ascii(t: RenderedTable) -> str:
    head = ["deg"] + list(t.headers)
    body = [[str(d)] + [str(r) if r else "" for r in cells] for d, cells in t.rows]
    widths = [max([len(h)] + [len(row[i]) for row in body]) for i, h in enumerate(head)]
    line = lambda cells: " | ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(head), "-+-".join("-" * w for w in widths)]
    out += [line(row) for row in body]
    if t.footer:
        out.append(t.footer)
    return "\n".join(out) + "\n"


def _latex_header(h: str) -> str:
    if h == "H*(Y)":
        return "$H^*(Y)$"
    p = h[len("H*(B_"):-len(")[-mu]")]
    return f"$H^*(B_{{{p}}})[-\\mu]$"


def _latex(t: RenderedTable) -> str:
    cols = "r|" + "c" * len(t.headers)
    out = [f"\\begin{{tabular}}{{{cols}}}",
           " & ".join(["$d$"] + [_latex_header(h) for h in t.headers]) + " \\\\", "\\hline"]
    for d, cells in t.rows:
        out.append(" & ".join([f"${d}$"] + [f"${r}$" if r else "" for r in cells]) + " \\\\")
    out.append("\\end{tabular}")
    if t.footer:
        out.append(f"% {t.footer}")
    return "\n".join(out) + "\n"


def _page_json(page: E1Page) -> dict:
    return {"spec": page.spec_name, "maslov": page.maslov, "window": format_period(page.lam_max),
            "columns": [{"period": format_period(c.period),
                         "entries": [{"source": e.source_id, "vertical": e.vertical,
                                      "ranks": _ranks_json(e.ranks)} for e in c.entries]}
                        for c in page.columns]}


def _page_csv(page: E1Page) -> str:
    lines = ["period,source,degree,rank"]
    for c in page.columns:
        for e in c.entries:
            lines += [f"{format_period(c.period)},{e.source_id},{d},{r}" for d, r in e.ranks]
    return "\n".join(lines) + "\n"


# -- filtration chains ----------------------------------------------------------------------

def _power(d: int, lo: int, hi: int) -> str:
    if lo != hi:
        return f"K_{d}^{{[{lo},{hi}]}}"
    if lo == 1:
        return f"K_{d}"
    exp = str(lo)
    return f"K_{d}^{exp}" if len(exp) == 1 else f"K_{d}^{{{exp}}}"


def _label(p: Fraction) -> str:
    s = format_period(p)
    return f"F_{{{s}}}" if len(s) > 1 else f"F_{s}"


def chain_terms(report: FiltrationReport) -> list[str]:
    """One "F_T = ..." term per period where some interval changes."""
    out = []
    for p, cells in report.steps():
        parts = [_power(d, lo, hi) for d, (lo, hi) in sorted(cells.items())]
        term = f"{_label(p)} = " + " ⊕ ".join(parts)
        if report.is_full(p):
            term += " = H*(Y)"
        out.append(term)
    return out


def render_chain(report: FiltrationReport) -> str:
    return " ⊂ ".join(["0"] + chain_terms(report))


def _report_json(report: FiltrationReport) -> dict:
    return {"spec": report.spec_name, "mode": report.mode,
            "periods": [format_period(p) for p in report.periods],
            "total": _ranks_json(report.total),
            "cells": [{"period": format_period(p), "degree": d, "lo": lo, "hi": hi}
                      for p, d, lo, hi in report.cells],
            "chain": chain_terms(report), "notes": list(report.notes)}


def _report_ascii(report: FiltrationReport) -> str:
    lines = [f"{report.spec_name} ({report.mode})", render_chain(report)]
    degs = report.degrees()
    lines.append("period | " + " ".join(f"H^{d}" for d in degs))
    for p in report.periods:
        cells = []
        for d in degs:
            lo, hi = report.interval(p, d)
            cells.append(str(lo) if lo == hi else f"[{lo},{hi}]")
        lines.append(f"{format_period(p)} | " + " ".join(cells))
    lines += [f"note: {n}" for n in report.notes]
    return "\n".join(lines) + "\n"


def _report_latex(report: FiltrationReport) -> str:
    body = render_chain(report).replace("⊕", "\\oplus").replace("⊂", "\\subset").replace("H*(Y)", "H^*(Y)")
    body = re.sub(r"K_(-?\d+)", lambda m: f"\\mathbb{{K}}_{{{m.group(1)}}}", body)
    return f"\\[ {body} \\]\n"


def render(obj, fmt: str = "ascii", dim: int | None = None) -> str:
    """Text for a page, a filtration report or a spec in one of ascii, latex, json, csv."""
    if fmt not in ("ascii", "latex", "json", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, ManifoldSpec):
        if fmt != "json":
            raise ValueError("specs render only as json")
        return dump_spec(obj)
    if isinstance(obj, E1Page):
        if fmt == "json":
            return json.dumps(_page_json(obj), indent=2, ensure_ascii=False) + "\n"
        if fmt == "csv":
            return _page_csv(obj)
        t = page_table(obj, dim)
        return _ascii(t) if fmt == "ascii" else _latex(t)
    if isinstance(obj, FiltrationReport):
        if fmt == "json":
            return json.dumps(_report_json(obj), indent=2, ensure_ascii=False) + "\n"
        if fmt == "csv":
            return "period,degree,lo,hi\n" + "".join(
                f"{format_period(p)},{d},{lo},{hi}\n" for p, d, lo, hi in obj.cells)
        return _report_ascii(obj) if fmt == "ascii" else _report_latex(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")


# -- verification ------------------------------------------------------------------------

def verify_spec(spec: ManifoldSpec) -> list[Diagnostic]:
    """Every structural invariant of every module on one spec."""
    from .equivariant import assemble_equivariant_page, check_collapse, eq27_identity
    from .index import compatibly_weighted, outer_periods, periodicity_shift
    from .page import (assemble_e1, extend_by_periodicity, required_window, sigma_betti, support_bounds,
                       verify_central_symmetry)
    from .presets import AFFINE_ARMS, imaginary_root_check
    from .solver import pairing_consistency, solve_filtration, step_consistency

    out = list(_validate(spec))
    if out:
        return out
    w = required_window(spec)
    page = assemble_e1(spec, w)
    mu = page.maslov
    out += verify_central_symmetry(page, spec)
    if compatibly_weighted(spec):
        out += support_bounds(page, spec)
    out += [d for d in pairing_consistency(page, spec) if d.code != "skipped"]
    for T in outer_periods(spec, w):
        out += step_consistency(spec, page, T)
    # periodicity: columns past 1 are those in (0, 1] moved down by 2N mu
    ext = extend_by_periodicity(assemble_e1(spec, 1), w)
    for c in page.columns:
        if c.period > 1 and ext.column(c.period).ranks != c.ranks:
            out.append(Diagnostic("periodicity", format_period(c.period), "column differs from its shifted copy"))
    for f in spec.families:
        for T in outer_periods(spec, 1):
            if T.denominator == f.m:
                try:
                    periodicity_shift(spec, f, T, 1)
                except CrossCheckFailure as exc:
                    out.append(Diagnostic("periodicity", f"Z/{f.m}:{f.id}", str(exc)))
    report = solve_filtration(spec, page)
    if spec.csr_weight is not None:
        n = spec.dim
        for c in page.columns:
            if c.period > 0 and c.period.denominator == 1:
                N = c.period.numerator
                for d in (-2 * N * mu + n - 1, -2 * N * mu + n):
                    if c[d]:
                        out.append(Diagnostic("mid-degree", format_period(c.period),
                                              f"slice column has rank {c[d]} in degree {d}"))
        if not any(report.is_full(p) for p in report.periods):
            out.append(Diagnostic("saturation", spec.name, f"filtration never reaches H*(Y) by {format_period(w)}"))
        eq_page = assemble_equivariant_page(spec, w)
        out += check_collapse(spec, eq_page)
        out += eq27_identity(spec)
        if spec.csr_weight == 1:
            out += weight1_law(spec, report)
    if spec.name.startswith("ParabolicHiggs_"):
        affine = spec.name.split("_", 1)[1]
        if affine in AFFINE_ARMS and affine != "A0":
            out += imaginary_root_check(affine, report)
    return out


def weight1_law(spec: ManifoldSpec, report: FiltrationReport) -> list[Diagnostic]:
    """Below slope 1 only classes of degree >= 2 die and one top-degree class survives; at 1
    exactly H^{>=2} has died; at 2 everything has."""
    out = []
    H = report.total
    n = spec.dim
    below = [p for p in report.periods if p < 1]
    for p in below:
        for d, r in H:
            lo, hi = report.interval(p, d)
            if d < 2 and hi:
                out.append(Diagnostic("weight-1", format_period(p), f"degree {d} is hit below slope 1"))
    last = report.interval(below[-1], n) if below else (0, 0)
    if last != (H[n] - 1, H[n] - 1):
        out.append(Diagnostic("weight-1", spec.name,
                              f"just below slope 1 the killed rank in degree {n} is {last}, expected {H[n] - 1}"))
    for lam, rule in ((Fraction(1), lambda d: d >= 2), (Fraction(2), lambda d: True)):
        for d, r in H:
            want = r if rule(d) else 0
            if report.interval(lam, d) != (want, want):
                out.append(Diagnostic("weight-1", format_period(lam),
                                      f"degree {d}: {report.interval(lam, d)} instead of {want}"))
    return out


def _validate(spec: ManifoldSpec) -> list[Diagnostic]:
    from .model import validate_spec

    return validate_spec(spec)


# -- corpus ---------------------------------------------------------------------------------

def corpus_dir() -> Path:
    return Path(__file__).with_name("corpus")


def emit_corpus(directory) -> list[Path]:
    from .presets import static_specs

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, spec in static_specs().items():
        p = directory / f"{name}.json"
        p.write_text(dump_spec(spec), encoding="utf-8")
        paths.append(p)
    return paths


# -- commands ---------------------------------------------------------------------------------

def _resolve(arg: str) -> ManifoldSpec:
    """A path to a spec document or the name of a preset."""
    from .presets import get_preset, preset_names

    p = Path(arg)
    if p.exists():
        return load_spec(p)
    if arg in preset_names():
        return get_preset(arg)
    raise SpecParseError("$", f"no such file or preset: {arg}")


def _window(spec: ManifoldSpec, value: str | None) -> Fraction:
    from .page import required_window

    if value in (None, "auto"):
        return required_window(spec)
    if not _PERIOD.match(value):
        raise SpecParseError("--window", f"expected 'k/m', 'N' or 'auto', got {value!r}")
    return Fraction(value)


def _print_diags(diags) -> int:
    for d in diags:
        print(d)
    return EXIT_DIAGNOSTICS if diags else EXIT_OK


def cmd_validate(args) -> int:
    from .model import torsion_coverage_notices

    spec = _resolve(args.spec)
    diags = _validate(spec)
    if not diags:
        maslov_index(spec)
        for n in torsion_coverage_notices(spec):
            print(f"notice: {n}")
        print(f"{spec.name}: ok")
    return _print_diags(diags)


def cmd_e1(args) -> int:
    from .page import assemble_e1

    spec = _resolve(args.spec)
    diags = _validate(spec)
    if diags:
        return _print_diags(diags)
    page = assemble_e1(spec, _window(spec, args.window))
    sys.stdout.write(render(page, args.format, spec.dim))
    return EXIT_OK


def cmd_filtration(args) -> int:
    from .page import assemble_e1
    from .solver import solve_filtration

    spec = _resolve(args.spec)
    diags = _validate(spec)
    if diags:
        return _print_diags(diags)
    report = solve_filtration(spec, assemble_e1(spec, _window(spec, args.window)))
    sys.stdout.write(render(report, args.format))
    return EXIT_OK


def cmd_equivariant(args) -> int:
    from .equivariant import (assemble_equivariant_page, check_collapse, eq27_identity,
                              equivariant_filtration_bounds, solve_equivariant_slice)

    spec = _resolve(args.spec)
    diags = _validate(spec)
    if diags:
        return _print_diags(diags)
    w = _window(spec, args.window)
    eh = solve_equivariant_slice(spec, args.cutoff)
    page = assemble_equivariant_page(spec, w)
    diags = check_collapse(spec, page)
    if spec.csr_weight is not None:
        diags += eq27_identity(spec, args.cutoff)
    if args.format in ("json", "csv"):
        sys.stdout.write(render(page, args.format))
    else:
        print(f"equivariant slice ranks: {eh.as_dict()}")
        sys.stdout.write(render(page, args.format, spec.dim))
        if not diags:
            report = equivariant_filtration_bounds(spec, page, u_rule=args.u_rule)
            sys.stdout.write(render(report, args.format))
    return _print_diags(diags)


def cmd_verify(args) -> int:
    if args.corpus:
        paths = sorted(corpus_dir().glob("*.json"))
        specs = [(p.stem, load_spec(p)) for p in paths]
    elif args.spec:
        specs = [(args.spec, _resolve(args.spec))]
    else:
        print("verify needs a spec or --corpus", file=sys.stderr)
        return EXIT_PARSE
    failed = 0
    for label, spec in specs:
        diags = verify_spec(spec)
        print(f"{'FAIL' if diags else 'ok'}  {label}")
        for d in diags:
            print(f"      {d}")
        failed += bool(diags)
    clean = len(specs) - failed
    if args.corpus:
        from .presets import static_specs

        expected = {name: dump_spec(s) for name, s in static_specs().items()}
        for p in paths:
            if expected.get(p.stem) != p.read_text(encoding="utf-8"):
                print(f"FAIL  {p.name} differs from the generated preset")
                failed += 1
    print(f"{clean}/{len(specs)} specs clean")
    return EXIT_DIAGNOSTICS if failed else EXIT_OK


def cmd_presets(args) -> int:
    from .presets import preset_names

    if args.emit:
        for p in emit_corpus(args.emit):
            print(p)
    else:
        for name in preset_names():
            print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floerseq", description="Morse-Bott-Floer spectral sequence calculator")
    sub = ap.add_subparsers(dest="command", required=True)
    formats = ("ascii", "latex", "json", "csv")

    p = sub.add_parser("validate", help="check a spec and print diagnostics")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("e1", help="print the E1 page")
    p.add_argument("spec")
    p.add_argument("--window", default="auto")
    p.add_argument("--format", choices=formats, default="ascii")
    p.set_defaults(func=cmd_e1)

    p = sub.add_parser("filtration", help="solve for the filtration intervals")
    p.add_argument("spec")
    p.add_argument("--window", default="auto")
    p.add_argument("--format", choices=formats, default="ascii")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("equivariant", help="equivariant page, slice ranks and bounds")
    p.add_argument("spec")
    p.add_argument("--cutoff", type=int, default=-20)
    p.add_argument("--window", default="auto")
    p.add_argument("--u-rule", action="store_true", dest="u_rule")
    p.add_argument("--format", choices=formats, default="ascii")
    p.set_defaults(func=cmd_equivariant)

    p = sub.add_parser("verify", help="run every invariant on a spec or on the shipped corpus")
    p.add_argument("spec", nargs="?")
    p.add_argument("--corpus", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("presets", help="list presets or write them as corpus files")
    p.add_argument("--emit", metavar="DIR")
    p.set_defaults(func=cmd_presets)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CrossCheckFailure as exc:
        print(f"cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except FloerSeqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS


if __name__ == "__main__":
    sys.exit(main())
