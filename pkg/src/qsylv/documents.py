"""JSON document formats for instances, solutions and reports.

A matrix is stored as {"rows": m, "cols": n, "entries": [[[w,x,y,z],
...], ...]} with row-major nested arrays of 4-component reals.  An
instance document carries the matrices under their coefficient names at
the top level plus "variant" (and "eta" for eta variants); absent
optional blocks mean empty matrices, whose dimensions are inferred from
the present ones.  Serialization uses plain floats, so documents
re-parse to bit-identical matrices.
"""

from __future__ import annotations

import json

from .eta import (EtaFullInstance, EtaMixedInstance, EtaThreeInstance,
                  EtaTwoInstance)
from .qcore import ETAS
from .qmatrix import QMatrix
from .solvers.five_term import FiveTermInstance
from .solvers.master import MasterInstance
from .solvers.specials import MixedInstance, ThreeTermInstance
from .solvers.two_term import TwoTermInstance


class ParseError(ValueError):
    """A document is malformed; the message names the offending key."""


VARIANTS = ("master", "three-term", "mixed", "two-term", "five-term",
            "eta-full", "eta-three", "eta-two", "eta-mixed")

_KEYS = {
    "master": tuple(f"{s}{i}" for s in "ABCDEF" for i in range(1, 5)) + ("Cc",),
    "three-term": tuple(f"{s}{i}" for s in "ABCDEF" for i in range(1, 4)) + ("C",),
    "mixed": ("A1", "B1", "C1", "C2", "A2", "B2", "C3", "C4",
              "A3", "B3", "A4", "B4", "Cc"),
    "two-term": ("C3", "D3", "C4", "D4", "E1"),
    "five-term": ("A1", "B1", "A2", "B2", "A3", "B3", "A4", "B4", "B"),
    "eta-full": tuple(f"{s}{i}" for s in "ACE" for i in range(1, 5)) + ("Cc",),
    "eta-three": tuple(f"{s}{i}" for s in "ACE" for i in range(1, 4)) + ("C",),
    "eta-two": ("B1", "C1", "D1"),
    "eta-mixed": ("A1", "C1", "B1", "D1", "A2", "A3", "D3"),
}

# alternative labels accepted on input, normalized on load
_ALIASES = {
    "three-term": {"Cc": "C"},
    "eta-three": {"Cc": "C", "B1": "C1", "B2": "C2", "B3": "C3"},
    "eta-full": {"B1": "C1", "B2": "C2", "B3": "C3", "B4": "C4"},
}

_RESERVED = ("variant", "eta", "format", "_notes", "seed")

SOLUTION_KEYS = {
    "master": ("U", "V", "X", "Y", "Z"),
    "three-term": ("X", "Y", "Z"),
    "mixed": ("X1", "X2"),
    "two-term": ("X3", "X4"),
    "five-term": ("X1", "X2", "Y1", "Y2", "Y3"),
    "eta-full": ("U", "X", "Y", "Z"),
    "eta-three": ("X", "Y", "Z"),
    "eta-two": ("Y", "Z"),
    "eta-mixed": ("X", "Y"),
}


def matrix_to_doc(m: QMatrix) -> dict:
    entries = [[[m.w[p, q], m.x[p, q], m.y[p, q], m.z[p, q]]
                for q in range(m.cols)] for p in range(m.rows)]
    return {"rows": m.rows, "cols": m.cols, "entries": entries}


def matrix_from_doc(doc, key: str) -> QMatrix:
    if not isinstance(doc, dict):
        raise ParseError(f"matrix {key!r} must be an object")
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"matrix {key!r} needs rows, cols, entries") from exc
    if rows < 0 or cols < 0:
        raise ParseError(f"matrix {key!r} has negative dimensions")
    if len(entries) != rows:
        raise ParseError(f"matrix {key!r}: expected {rows} entry rows")
    out = QMatrix.zeros(rows, cols)
    for p, row in enumerate(entries):
        if len(row) != cols:
            raise ParseError(f"matrix {key!r}: row {p} has {len(row)} entries,"
                             f" expected {cols}")
        for q, val in enumerate(row):
            if len(val) != 4:
                raise ParseError(f"matrix {key!r}: entry ({p},{q}) must have "
                                 "4 components")
            try:
                out.w[p, q], out.x[p, q], out.y[p, q], out.z[p, q] = (
                    float(val[0]), float(val[1]), float(val[2]), float(val[3]))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"matrix {key!r}: entry ({p},{q}) is not "
                                 "numeric") from exc
    return out


class _Dims:
    """Named dimensions collected from present matrices; conflicts are
    reported against the keys that disagree, absences default to 0."""

    def __init__(self):
        self.values = {}
        self.sources = {}

    def feed(self, name, value, key):
        if name in self.values:
            if self.values[name] != value:
                raise ParseError(
                    f"key {key!r} implies {name} = {value}, but "
                    f"{self.sources[name]!r} implies {self.values[name]}")
        else:
            self.values[name] = value
            self.sources[name] = key

    def get(self, name, default=0):
        return self.values.get(name, default)


def _collect(present: dict, rules, dims: _Dims):
    # rules: key -> ((row_dim_name, col_dim_name))
    for key, (rname, cname) in rules.items():
        if key in present:
            m = present[key]
            dims.feed(rname, m.rows, key)
            dims.feed(cname, m.cols, key)


def _materialize(present: dict, rules, dims: _Dims) -> dict:
    out = {}
    for key, (rname, cname) in rules.items():
        if key in present:
            out[key] = present[key]
        else:
            out[key] = QMatrix.zeros(dims.get(rname), dims.get(cname))
    return out


def _master_rules():
    rules = {"Cc": ("cr", "cc")}
    for i in (1, 2, 3, 4):
        rules[f"A{i}"] = (f"q{i}", f"p{i}")
        rules[f"B{i}"] = (f"r{i}", f"s{i}")
        rules[f"E{i}"] = ("cr", f"p{i}")
        rules[f"F{i}"] = (f"r{i}", "cc")
        if i == 1:
            rules["C1"] = ("q1", "cc")
            rules["D1"] = ("cr", "s1")
        else:
            rules[f"C{i}"] = (f"q{i}", f"r{i}")
            rules[f"D{i}"] = (f"p{i}", f"s{i}")
    return rules


def _three_term_rules():
    rules = {"C": ("cr", "cc")}
    for i in (1, 2, 3):
        rules[f"A{i}"] = (f"q{i}", f"p{i}")
        rules[f"B{i}"] = (f"r{i}", f"s{i}")
        rules[f"C{i}"] = (f"q{i}", f"r{i}")
        rules[f"D{i}"] = (f"p{i}", f"s{i}")
        rules[f"E{i}"] = ("cr", f"p{i}")
        rules[f"F{i}"] = (f"r{i}", "cc")
    return rules


def _mixed_rules():
    return {
        "Cc": ("cr", "cc"),
        "A1": ("q1", "p1"), "B1": ("t1", "s1"),
        "C1": ("q1", "t1"), "C2": ("p1", "s1"),
        "A2": ("q2", "p2"), "B2": ("t2", "s2"),
        "C3": ("q2", "t2"), "C4": ("p2", "s2"),
        "A3": ("cr", "p1"), "B3": ("t1", "cc"),
        "A4": ("cr", "p2"), "B4": ("t2", "cc"),
    }


def _two_term_rules():
    return {"E1": ("p", "q"), "C3": ("p", "m3"), "D3": ("n3", "q"),
            "C4": ("p", "m4"), "D4": ("n4", "q")}


def _five_term_rules():
    rules = {"B": ("p", "q")}
    for i in (1, 2, 3, 4):
        rules[f"A{i}"] = ("p", f"a{i}")
        rules[f"B{i}"] = (f"b{i}", "q")
    return rules


def _eta_full_rules():
    rules = {"Cc": ("n", "n")}
    for i in (1, 2, 3, 4):
        rules[f"A{i}"] = (f"q{i}", f"p{i}")
        rules[f"E{i}"] = ("n", f"p{i}")
        rules[f"C{i}"] = (f"q{i}", "n" if i == 1 else f"p{i}")
    return rules


def _eta_three_rules():
    rules = {"C": ("n", "n")}
    for i in (1, 2, 3):
        rules[f"A{i}"] = (f"q{i}", f"p{i}")
        rules[f"E{i}"] = ("n", f"p{i}")
        rules[f"C{i}"] = (f"q{i}", f"p{i}")
    return rules


_RULES = {
    "master": _master_rules(),
    "three-term": _three_term_rules(),
    "mixed": _mixed_rules(),
    "two-term": _two_term_rules(),
    "five-term": _five_term_rules(),
    "eta-full": _eta_full_rules(),
    "eta-three": _eta_three_rules(),
    "eta-two": {"D1": ("d", "d"), "B1": ("d", "nb"), "C1": ("d", "nc")},
    "eta-mixed": {"D3": ("d", "d"), "A1": ("q1", "nx"), "C1": ("q1", "nx"),
                  "B1": ("ny", "s1"), "D1": ("ny", "s1"),
                  "A2": ("d", "nx"), "A3": ("d", "ny")},
}


def _load_matrices(doc: dict, variant: str) -> dict:
    keys = _KEYS[variant]
    aliases = _ALIASES.get(variant, {})
    present = {}
    for key, value in doc.items():
        if key in _RESERVED:
            continue
        name = aliases.get(key, key)
        if name not in keys:
            raise ParseError(f"unknown matrix key {key!r} for variant "
                             f"{variant!r}")
        if name in present:
            raise ParseError(f"matrix {name!r} given twice (alias {key!r})")
        present[name] = matrix_from_doc(value, key)
    rules = _RULES[variant]
    dims = _Dims()
    _collect(present, rules, dims)
    return _materialize(present, rules, dims)


def _doc_eta(doc: dict, default: str = "i") -> str:
    eta = doc.get("eta", default)
    if eta not in ETAS:
        raise ParseError(f"eta must be one of {ETAS}, got {eta!r}")
    return eta


def instance_from_doc(doc: dict, variant: str | None = None,
                      eta_default: str = "i"):
    """Build the variant's instance object from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    variant = variant or doc.get("variant")
    if variant not in VARIANTS:
        raise ParseError(f"variant must be one of {VARIANTS}, got {variant!r}")
    mats = _load_matrices(doc, variant)
    if variant == "master":
        return MasterInstance(**mats)
    if variant == "three-term":
        return ThreeTermInstance(**mats)
    if variant == "mixed":
        return MixedInstance(**mats)
    if variant == "two-term":
        return TwoTermInstance(**mats)
    if variant == "five-term":
        return FiveTermInstance(**mats)
    eta = _doc_eta(doc, eta_default)
    if variant == "eta-full":
        return EtaFullInstance(eta=eta, **mats)
    if variant == "eta-three":
        return EtaThreeInstance(eta=eta, **mats)
    if variant == "eta-two":
        return EtaTwoInstance(eta=eta, **mats)
    return EtaMixedInstance(eta=eta, **mats)


_INSTANCE_TYPES = {
    "master": MasterInstance,
    "three-term": ThreeTermInstance,
    "mixed": MixedInstance,
    "two-term": TwoTermInstance,
    "five-term": FiveTermInstance,
    "eta-full": EtaFullInstance,
    "eta-three": EtaThreeInstance,
    "eta-two": EtaTwoInstance,
    "eta-mixed": EtaMixedInstance,
}


def variant_of(inst) -> str:
    for name, cls in _INSTANCE_TYPES.items():
        if type(inst) is cls:
            return name
    raise ParseError(f"unsupported instance type {type(inst).__name__}")


def instance_to_doc(inst, notes=None) -> dict:
    variant = variant_of(inst)
    doc = {"format": "qsylv-instance", "variant": variant}
    if hasattr(inst, "eta"):
        doc["eta"] = inst.eta
    if notes:
        doc["_notes"] = list(notes)
    for key in _KEYS[variant]:
        doc[key] = matrix_to_doc(getattr(inst, key))
    return doc


def solution_to_doc(variant: str, sol) -> dict:
    keys = SOLUTION_KEYS[variant]
    if hasattr(sol, "as_tuple"):
        sol = sol.as_tuple()
    if len(sol) != len(keys):
        raise ParseError(f"variant {variant!r} solutions have {len(keys)} "
                         f"blocks, got {len(sol)}")
    doc = {"format": "qsylv-solution", "variant": variant}
    for key, m in zip(keys, sol):
        doc[key] = matrix_to_doc(m)
    return doc


def solution_from_doc(doc: dict, variant: str | None = None) -> tuple:
    if not isinstance(doc, dict):
        raise ParseError("solution document must be a JSON object")
    variant = variant or doc.get("variant")
    if variant not in SOLUTION_KEYS:
        raise ParseError(f"variant must be one of {VARIANTS}, got {variant!r}")
    out = []
    for key in SOLUTION_KEYS[variant]:
        if key not in doc:
            raise ParseError(f"solution is missing matrix {key!r}")
        out.append(matrix_from_doc(doc[key], key))
    return tuple(out)


def params_from_doc(doc: dict, family) -> dict:
    """Free-parameter matrices keyed by name, validated against a family."""
    if not isinstance(doc, dict):
        raise ParseError("parameter document must be a JSON object")
    known = {p.name for p in family.free_params}
    out = {}
    for key, value in doc.items():
        if key in _RESERVED:
            continue
        if key not in known:
            raise ParseError(f"unknown free parameter {key!r}")
        out[key] = matrix_from_doc(value, key)
    return out


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def dump_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
