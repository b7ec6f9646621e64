"""Command-line front end.

Every verb reads its structures from JSON files, calls the matching library
operation and writes one JSON document (or ``--format summary`` lines).

Exit status: 0 success, 1 law or check failure, 2 usage or parse error,
3 pushout not saturated at the requested bound.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .adjunction import (
    CHECK_NAMES,
    apply_L,
    apply_M,
    apply_R,
    map_on_2cell,
    verify_adjunctions,
)
from .category import Functor, boff_factorize, classify_functor
from .errors import DeltaLensError, GenerationFailed, NotSaturated
from .homcats import (
    LensSpan,
    SpanLensMorphism,
    SymLensMorphism,
    SymmetricLens,
    dagger,
    embed_lens_spn,
    embed_lens_sym,
    fake_pullback,
    is_invertible_2cell,
    is_invertible_sym_2cell,
    lensB_product,
    spnlens_hcompose,
    symlens_hcompose,
)
from .jsonio import ParseError, category_doc, enc_ident, functor_doc, to_doc
from .lenses import (
    Cofunctor,
    Lens,
    MealyMorphism,
    cofunctor_span_rep,
    compose_cofunctors,
    compose_lens,
    compose_mealy,
    lens_diagram_rep,
    mealy_span_rep,
)
from .pushout import DEFAULT_BOUND
from . import testgen

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSATURATED = 0, 1, 2, 3

GEN_KINDS = ("category", "fixture", "lens", "cofunctor", "mealy", "symmetric-lens", "lens-span")


class CheckFailed(Exception):
    """A verb ran to completion but its verdict is negative."""

    def __init__(self, doc):
        super().__init__(doc.get("kind"))
        self.doc = doc


def jsonable(x):
    """Best-effort JSON form of a witness."""
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (tuple, list)):
        return [jsonable(y) for y in x]
    if isinstance(x, dict):
        return [[jsonable(k), jsonable(v)] for k, v in sorted(x.items(), key=lambda kv: repr(kv[0]))]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(y) for y in x), key=repr)
    try:
        return to_doc(x)
    except TypeError:
        return repr(x)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deltalens", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result document here instead of stdout")
    common.add_argument("--format", choices=("json", "summary"), default="json")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="word-length bound for pushouts")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, help, *inputs):
        sp = sub.add_parser(name, help=help, parents=[common])
        for i in inputs:
            sp.add_argument(i)
        return sp

    verb("validate", "check every law of a document", "file")
    verb("classify", "functor classes with failure witnesses", "functor")
    verb("factor", "bijective-on-objects / fully faithful factorisation", "functor")
    verb("compose", "compose two structures (first argument runs first)", "first", "second")
    verb("span-rep", "span representation of a cofunctor, Mealy morphism or lens", "file")
    verb("fake-pullback", "fake pullback of a cospan of lenses", "left", "right")
    verb("product", "product of two lenses over a common view", "first", "second")
    sp = sub.add_parser("apply", help="apply M, R or L to a structure or 2-cell", parents=[common])
    sp.add_argument("functor", choices=("M", "R", "L"))
    sp.add_argument("file")
    verb("dagger", "reverse a symmetric lens", "file")
    sp = verb("embed", "embed a lens as a span or symmetric lens", "file")
    sp.add_argument("--into", choices=("symlens", "span"), default="symlens")
    verb("check-2cell", "verify a 2-cell document", "file")
    sp = verb("check-adjunction", "verify the adjoint triple on generated instances", "A", "B")
    sp.add_argument("--count", type=int, default=10)
    sp = sub.add_parser("gen", help="generate a seeded instance", parents=[common])
    sp.add_argument("what", choices=GEN_KINDS)
    sp.add_argument("inputs", nargs="*", help="category files (or a fixture name for 'fixture')")
    sp.add_argument("--max-objects", type=int, default=3)
    sp.add_argument("--max-generators", type=int, default=3)
    sp.add_argument("--max-states", type=int, default=4)
    return p


# -- verbs ------------------------------------------------------------------------------


def _load(path, kind=None):
    return jsonio.load(path, kind)


def cmd_validate(a):
    x = _load(a.file)
    return {"kind": "verdict", "document": to_doc(x)["kind"], "valid": True}


def cmd_classify(a):
    F = _load(a.functor, "functor")
    c = classify_functor(F)
    return {
        "kind": "functor-class",
        "isDiscreteOpfibration": c.is_discrete_opfibration,
        "isBijectiveOnObjects": c.is_bijective_on_objects,
        "isFullyFaithful": c.is_fully_faithful,
        "failureWitness": {k: jsonable(v) for k, v in c.failure_witness.items()},
    }


def cmd_factor(a):
    e, image, m = boff_factorize(_load(a.functor, "functor"))
    return {"kind": "factorisation", "e": functor_doc(e), "image": category_doc(image), "m": functor_doc(m)}


def cmd_compose(a):
    first, second = _load(a.first), _load(a.second)
    if type(first) is not type(second):
        raise ParseError(a.second, None, "kind", "both arguments must have the same kind")
    if isinstance(first, Functor):
        return to_doc(first.then(second))
    ops = {
        Cofunctor: compose_cofunctors,
        MealyMorphism: compose_mealy,
        Lens: compose_lens,
        LensSpan: spnlens_hcompose,
        SymmetricLens: symlens_hcompose,
    }
    for cls, op in ops.items():
        if isinstance(first, cls):
            return to_doc(op(first, second))
    raise ParseError(a.first, None, "kind", "composition is not defined for this kind")


def cmd_span_rep(a):
    x = _load(a.file, ("cofunctor", "mealy", "lens"))
    if isinstance(x, Cofunctor):
        s = cofunctor_span_rep(x)
        return {
            "kind": "cofunctor-span",
            "apex": category_doc(s.apex),
            "opfibration": functor_doc(s.opfibration),
            "inclusion": functor_doc(s.inclusion),
        }
    if isinstance(x, MealyMorphism):
        s = mealy_span_rep(x)
        return {"kind": "mealy-span", "apex": category_doc(s.apex), "left": functor_doc(s.left), "right": functor_doc(s.right)}
    d = lens_diagram_rep(x)
    return {
        "kind": "lens-diagram",
        "apex": category_doc(d.apex),
        "inclusion": functor_doc(d.inclusion),
        "opfibration": functor_doc(d.opfibration),
        "get": functor_doc(d.get),
    }


def cmd_fake_pullback(a):
    return to_doc(fake_pullback(_load(a.left, "lens"), _load(a.right, "lens")))


def cmd_product(a):
    prod, p0, p1 = lensB_product(_load(a.first, "lens"), _load(a.second, "lens"))
    return {"kind": "lens-product", "product": to_doc(prod), "proj0": functor_doc(p0), "proj1": functor_doc(p1)}


def cmd_apply(a):
    x = _load(a.file, ("lens-span", "symmetric-lens", "2-cell"))
    if isinstance(x, (SpanLensMorphism, SymLensMorphism)):
        return to_doc(map_on_2cell(a.functor, x, a.bound))
    if not isinstance(x, LensSpan if a.functor == "M" else SymmetricLens):
        raise ParseError(a.file, None, "kind", f"{a.functor} does not apply to this kind")
    if a.functor == "M":
        return to_doc(apply_M(x))
    if a.functor == "R":
        return to_doc(apply_R(x))
    return to_doc(apply_L(x, a.bound))


def cmd_dagger(a):
    return to_doc(dagger(_load(a.file, "symmetric-lens")))


def cmd_embed(a):
    lens = _load(a.file, "lens")
    return to_doc(embed_lens_sym(lens) if a.into == "symlens" else embed_lens_spn(lens))


def cmd_check_2cell(a):
    cell = _load(a.file, "2-cell")
    ok = cell.ok
    if isinstance(cell, SpanLensMorphism):
        inv = ok and is_invertible_2cell(cell)
    else:
        inv = ok and is_invertible_sym_2cell(cell)
    doc = {
        "kind": "2-cell-verdict",
        "checks": {"2-cell": "PASS" if ok else "FAIL", "invertible": "PASS" if inv else "FAIL"},
        "ok": ok,
        "invertible": inv,
        "witness": jsonable(cell.witness),
    }
    if not ok:
        raise CheckFailed(doc)
    return doc


def cmd_check_adjunction(a):
    A, B = _load(a.A, "category"), _load(a.B, "category")
    symlenses, spans = [], []
    for i in range(a.count):
        symlenses.append(testgen.gen_symlens(testgen.GenConfig(seed=testgen.derive_seed(a.seed, "symlens", i)), A, B))
        spans.append(testgen.gen_span(testgen.GenConfig(seed=testgen.derive_seed(a.seed, "span", i)), A, B))
    report = verify_adjunctions(A, B, symlenses, spans, a.bound)
    doc = {"kind": "adjunction-report", **report.to_json()}
    doc["checks"] = {k: doc["checks"][k] for k in CHECK_NAMES}
    doc["instances"] = [dict(r, witnesses=jsonable(r["witnesses"])) for r in doc["instances"]]
    if not report.passed:
        raise CheckFailed(doc)
    return doc


def cmd_gen(a):
    cfg = testgen.GenConfig(
        seed=a.seed, max_objects=a.max_objects, max_generators=a.max_generators, max_states=a.max_states
    )
    need = {"category": 0, "fixture": 1, "lens": 1, "cofunctor": 1, "mealy": 2, "symmetric-lens": 2, "lens-span": 2}[a.what]
    if len(a.inputs) != need:
        raise UsageError(f"gen {a.what} takes {need} input(s)")
    if a.what == "fixture":
        if a.inputs[0] not in testgen.FIXTURES:
            raise UsageError(f"unknown fixture {a.inputs[0]!r}; choose from {', '.join(testgen.FIXTURES)}")
        return to_doc(testgen.fixture(a.inputs[0]))
    cats = [_load(p, "category") for p in a.inputs]
    make = {
        "category": lambda: testgen.gen_category(cfg),
        "lens": lambda: testgen.gen_lens(cfg, *cats),
        "cofunctor": lambda: testgen.gen_cofunctor(cfg, *cats),
        "mealy": lambda: testgen.gen_mealy(cfg, *cats),
        "symmetric-lens": lambda: testgen.gen_symlens(cfg, *cats),
        "lens-span": lambda: testgen.gen_span(cfg, *cats),
    }[a.what]
    return to_doc(make())


class UsageError(Exception):
    pass


VERBS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "factor": cmd_factor,
    "compose": cmd_compose,
    "span-rep": cmd_span_rep,
    "fake-pullback": cmd_fake_pullback,
    "product": cmd_product,
    "apply": cmd_apply,
    "dagger": cmd_dagger,
    "embed": cmd_embed,
    "check-2cell": cmd_check_2cell,
    "check-adjunction": cmd_check_adjunction,
    "gen": cmd_gen,
}


# -- dispatch ---------------------------------------------------------------------------


def error_doc(e: Exception) -> dict:
    doc = {"kind": "error", "error": type(e).__name__, "message": str(e)}
    if isinstance(e, ParseError):
        doc.update(file=e.file, line=e.line, key=e.key)
    elif isinstance(e, NotSaturated):
        doc.update(bound=e.bound, wordCounts=list(e.word_counts))
    elif isinstance(e, DeltaLensError):
        axiom = getattr(e, "axiom", None)
        if axiom is not None:
            doc["axiom"] = axiom
        doc["witness"] = jsonable(e.witness)
    return doc


def summary_lines(verb: str, doc: dict, status: int) -> list[str]:
    if "checks" in doc:
        return [f"CHECK {k} {v}" for k, v in doc["checks"].items()]
    line = f"CHECK {verb} {'PASS' if status == EXIT_OK else 'FAIL' if status == EXIT_FAIL else 'SKIP'}"
    if doc.get("kind") == "error":
        return [line, f"# {doc['error']}: {doc['message']}"]
    return [line]


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        doc, status = VERBS[args.verb](args), EXIT_OK
    except CheckFailed as e:
        doc, status = e.doc, EXIT_FAIL
    except ParseError as e:
        doc, status = error_doc(e), EXIT_USAGE
    except UsageError as e:
        print(f"deltalens: error: {e}", file=stderr)
        return EXIT_USAGE
    except NotSaturated as e:
        doc, status = error_doc(e), EXIT_UNSATURATED
    except GenerationFailed as e:
        doc, status = error_doc(e), EXIT_FAIL
    except DeltaLensError as e:
        doc, status = error_doc(e), EXIT_FAIL
    if args.format == "summary":
        text = "\n".join(summary_lines(args.verb, doc, status)) + "\n"
    else:
        text = jsonio.dumps(jsonable_doc(doc))
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return status


def jsonable_doc(doc):
    if isinstance(doc, dict):
        return {k: jsonable_doc(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [jsonable_doc(v) for v in doc]
    if isinstance(doc, tuple):
        return [jsonable_doc(v) for v in doc]
    return doc if isinstance(doc, (str, int, float, bool)) or doc is None else enc_ident(jsonable(doc))


def main() -> None:
    sys.exit(run())
