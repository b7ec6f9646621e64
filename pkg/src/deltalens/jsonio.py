"""JSON documents for every structure, with deterministic output.

Every document carries a ``kind`` field.  Identifiers may be strings,
integers or nested tuples; tuples are written as JSON arrays and read back
as tuples.  Maps keyed by identifiers are written as JSON objects when every
key is a string and as ``[key, value]`` pair lists otherwise; both forms are
accepted on input.  Sub-documents (``dom``, ``get``, ``left-lens`` and so
on) may be given inline or as a path relative to the referencing file.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .category import FinCat, Functor, sort_key, sorted_idents
from .errors import DeltaLensError
from .homcats import LensSpan, SpanLensMorphism, SymLensMorphism, SymmetricLens, spnlens_2cell, symlens_2cell
from .lenses import Cofunctor, Lens, MealyMorphism

KINDS = (
    "category",
    "functor",
    "cofunctor",
    "mealy",
    "lens",
    "lens-span",
    "symmetric-lens",
    "2-cell",
)


class ParseError(DeltaLensError):
    """A malformed document; names the file, line and offending key."""

    def __init__(self, file, line, key, message):
        where = f"{file or '<input>'}:{line or '?'}"
        super().__init__(f"{where}: key {key!r}: {message}" if key else f"{where}: {message}")
        self.file = file
        self.line = line
        self.key = key


# -- encoding ------------------------------------------------------------------------


def enc_ident(x):
    if isinstance(x, tuple):
        return [enc_ident(y) for y in x]
    return x


def enc_map(m) -> Any:
    keys = sorted_idents(m)
    if all(isinstance(k, str) for k in keys):
        return {k: enc_ident(m[k]) for k in keys}
    return [[enc_ident(k), enc_ident(m[k])] for k in keys]


def _rows(rows):
    return sorted(rows, key=lambda r: sort_key(tuple(r)))


def category_doc(C: FinCat) -> dict:
    return {
        "kind": "category",
        "objects": [enc_ident(a) for a in sorted_idents(C.objects)],
        "morphisms": [
            {"name": enc_ident(u), "src": enc_ident(C.src(u)), "tgt": enc_ident(C.tgt(u))}
            for u in sorted_idents(C.morphisms)
        ],
        "identities": enc_map(C.identities),
        "composition": [[enc_ident(x) for x in r] for r in _rows((g, f, gf) for (g, f), gf in C.composition.items())],
    }


def functor_doc(F: Functor) -> dict:
    return {
        "kind": "functor",
        "dom": category_doc(F.dom),
        "cod": category_doc(F.cod),
        "onObjects": enc_map(F.ob),
        "onMorphisms": enc_map(F.mor),
    }


def cofunctor_doc(c: Cofunctor) -> dict:
    return {
        "kind": "cofunctor",
        "base": category_doc(c.base),
        "total": category_doc(c.total),
        "objAssign": enc_map(c.obj_map),
        "lifts": [[enc_ident(x) for x in r] for r in _rows((a, u, w) for (a, u), w in c.lift.items())],
    }


def mealy_doc(m: MealyMorphism) -> dict:
    return {
        "kind": "mealy",
        "dom": category_doc(m.dom),
        "cod": category_doc(m.cod),
        "states": [enc_ident(x) for x in sorted_idents(m.states)],
        "g0": enc_map(m.dom_anchor),
        "f0": enc_map(m.cod_anchor),
        "transitions": [
            [enc_ident(x) for x in r]
            for r in _rows((x, u, q, m.output[(x, u)]) for (x, u), q in m.transition.items())
        ],
    }


def lens_doc(lens: Lens) -> dict:
    return {"kind": "lens", "get": functor_doc(lens.get), "put": cofunctor_doc(lens.put)}


def span_doc(t: LensSpan) -> dict:
    return {
        "kind": "lens-span",
        "apex": category_doc(t.apex),
        "left-lens": lens_doc(t.left),
        "right-lens": lens_doc(t.right),
    }


def symlens_doc(s: SymmetricLens) -> dict:
    return {
        "kind": "symmetric-lens",
        "states": [enc_ident(x) for x in sorted_idents(s.states)],
        "forward-mealy": mealy_doc(s.forward),
        "backward-mealy": mealy_doc(s.backward),
    }


def cell_doc(cell) -> dict:
    if isinstance(cell, SpanLensMorphism):
        return {
            "kind": "2-cell",
            "source": span_doc(cell.source),
            "target": span_doc(cell.target),
            "h": functor_doc(cell.h),
        }
    return {
        "kind": "2-cell",
        "source": symlens_doc(cell.source),
        "target": symlens_doc(cell.target),
        "stateMap": enc_map(cell.state_map),
    }


def to_doc(x) -> dict:
    for cls, fn in (
        (FinCat, category_doc),
        (Functor, functor_doc),
        (Cofunctor, cofunctor_doc),
        (MealyMorphism, mealy_doc),
        (Lens, lens_doc),
        (LensSpan, span_doc),
        (SymmetricLens, symlens_doc),
        (SpanLensMorphism, cell_doc),
        (SymLensMorphism, cell_doc),
    ):
        if isinstance(x, cls):
            return fn(x)
    raise TypeError(f"no JSON document for {type(x).__name__}")


def dumps(doc: dict) -> str:
    """Byte-stable rendering: fixed indentation, insertion-ordered keys."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- decoding ------------------------------------------------------------------------


def dec_ident(x):
    if isinstance(x, list):
        return tuple(dec_ident(y) for y in x)
    return x


class _Reader:
    def __init__(self, text: str, file=None):
        self.text = text
        self.file = file

    def line_of(self, key):
        if key is None:
            return None
        m = re.search(r'"%s"\s*:' % re.escape(str(key)), self.text)
        # a missing key is reported at the start of the document
        return self.text.count("\n", 0, m.start()) + 1 if m else 1

    def fail(self, key, message):
        raise ParseError(self.file, self.line_of(key), key, message)

    def field(self, doc, key, types=None):
        if not isinstance(doc, dict):
            self.fail(None, "expected a JSON object")
        if key not in doc:
            self.fail(key, "missing")
        v = doc[key]
        if types is not None and not isinstance(v, types):
            self.fail(key, f"expected {_type_names(types)}")
        return v

    def map(self, doc, key):
        v = self.field(doc, key, (dict, list))
        if isinstance(v, dict):
            return {k: dec_ident(x) for k, x in v.items()}
        out = {}
        for pair in v:
            if not (isinstance(pair, list) and len(pair) == 2):
                self.fail(key, "map entries must be [key, value] pairs")
            out[dec_ident(pair[0])] = dec_ident(pair[1])
        return out

    def rows(self, doc, key, width):
        v = self.field(doc, key, list)
        for r in v:
            if not (isinstance(r, list) and len(r) == width):
                self.fail(key, f"rows must have {width} entries")
        return [tuple(dec_ident(x) for x in r) for r in v]

    def sub(self, doc, key, kind):
        v = self.field(doc, key, (dict, str))
        if isinstance(v, str):
            base = Path(self.file).parent if self.file else Path(".")
            path = base / v
            try:
                text = path.read_text()
            except OSError as e:
                self.fail(key, f"cannot read {path}: {e.strerror}")
            return _decode_text(text, str(path), kind)
        return decode(v, kind, self)


def _type_names(types):
    if not isinstance(types, tuple):
        types = (types,)
    names = {dict: "object", list: "array", str: "string", int: "integer"}
    return " or ".join(names.get(t, t.__name__) for t in types)


def decode(doc, kind=None, reader: _Reader | None = None):
    """Build the structure described by a parsed document.

    ``kind`` restricts the accepted document kind.  Structural checks run
    as usual, so a document that parses but breaks a law raises the
    corresponding law error.
    """
    r = reader or _Reader(json.dumps(doc, indent=2))
    k = r.field(doc, "kind", str)
    if k not in KINDS:
        r.fail("kind", f"unknown kind {k!r}")
    if kind is not None and k != kind and not (isinstance(kind, tuple) and k in kind):
        r.fail("kind", f"expected {kind!r}, got {k!r}")
    return _DECODERS[k](doc, r)


def _dec_category(doc, r):
    objs = [dec_ident(a) for a in r.field(doc, "objects", list)]
    mors = {}
    for m in r.field(doc, "morphisms", list):
        if not isinstance(m, dict) or not {"name", "src", "tgt"} <= set(m):
            r.fail("morphisms", "entries need name, src and tgt")
        mors[dec_ident(m["name"])] = (dec_ident(m["src"]), dec_ident(m["tgt"]))
    ids = r.map(doc, "identities")
    comp = {(g, f): gf for g, f, gf in r.rows(doc, "composition", 3)}
    return FinCat(objs, mors, ids, comp)


def _dec_functor(doc, r):
    dom, cod = r.sub(doc, "dom", "category"), r.sub(doc, "cod", "category")
    return Functor(dom, cod, r.map(doc, "onObjects"), r.map(doc, "onMorphisms"))


def _dec_cofunctor(doc, r):
    base, total = r.sub(doc, "base", "category"), r.sub(doc, "total", "category")
    lifts = {(a, u): w for a, u, w in r.rows(doc, "lifts", 3)}
    return Cofunctor(base, total, r.map(doc, "objAssign"), lifts)


def _dec_mealy(doc, r):
    dom, cod = r.sub(doc, "dom", "category"), r.sub(doc, "cod", "category")
    rows = r.rows(doc, "transitions", 4)
    return MealyMorphism(
        dom,
        cod,
        [dec_ident(x) for x in r.field(doc, "states", list)],
        r.map(doc, "g0"),
        r.map(doc, "f0"),
        {(x, u): q for x, u, q, _ in rows},
        {(x, u): v for x, u, _, v in rows},
    )


def _dec_lens(doc, r):
    return Lens(r.sub(doc, "get", "functor"), r.sub(doc, "put", "cofunctor"))


def _dec_span(doc, r):
    apex = r.sub(doc, "apex", "category")
    left, right = r.sub(doc, "left-lens", "lens"), r.sub(doc, "right-lens", "lens")
    if left.source != apex or right.source != apex:
        r.fail("apex", "legs do not start at the apex")
    return LensSpan(apex, left, right)


def _dec_symlens(doc, r):
    s = SymmetricLens(r.sub(doc, "forward-mealy", "mealy"), r.sub(doc, "backward-mealy", "mealy"))
    states = {dec_ident(x) for x in r.field(doc, "states", list)}
    if states != set(s.states):
        r.fail("states", "does not match the state set of the Mealy morphisms")
    return s


def _dec_cell(doc, r):
    source = r.sub(doc, "source", ("lens-span", "symmetric-lens"))
    target = r.sub(doc, "target", ("lens-span", "symmetric-lens"))
    if type(source) is not type(target):
        r.fail("target", "source and target are of different kinds")
    if isinstance(source, LensSpan):
        return spnlens_2cell(r.sub(doc, "h", "functor"), source, target)
    return symlens_2cell(r.map(doc, "stateMap"), source, target)


_DECODERS = {
    "category": _dec_category,
    "functor": _dec_functor,
    "cofunctor": _dec_cofunctor,
    "mealy": _dec_mealy,
    "lens": _dec_lens,
    "lens-span": _dec_span,
    "symmetric-lens": _dec_symlens,
    "2-cell": _dec_cell,
}


def _decode_text(text: str, file=None, kind=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(file, e.lineno, None, f"invalid JSON: {e.msg}") from None
    return decode(doc, kind, _Reader(text, file))


def loads(text: str, kind=None, file=None):
    return _decode_text(text, file, kind)


def load(path, kind=None):
    path = str(path)
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(path, None, None, f"cannot read file: {e.strerror}") from None
    return _decode_text(text, path, kind)


def dump(x, path=None) -> str:
    text = dumps(x if isinstance(x, dict) else to_doc(x))
    if path is not None:
        Path(path).write_text(text)
    return text
