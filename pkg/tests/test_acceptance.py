"""Acceptance criteria, one test each, with their wall-clock limits.

Every test prints a line ``ACCEPTANCE <n> PASS|FAIL <title> (<seconds>s)``;
the lines are repeated in the terminal summary.  Run directly with
``python tests/test_acceptance.py`` to get just the report.
"""

import random
import time

import pytest

import brute
import cases
from deltalens.adjunction import (
    counit_LM,
    get_pairing_is_fully_faithful,
    is_l_image,
    unit_MR,
    verify_adjunctions,
)
from deltalens.category import Functor, classify_functor, from_arrows, pullback
from deltalens.errors import AxiomViolation, LInapplicableAtBound, NotSaturated
from deltalens.homcats import (
    fake_pullback,
    is_invertible_2cell,
    is_invertible_sym_2cell,
    lensB_product,
    spnlens_associator,
    spnlens_left_unitor,
    spnlens_right_unitor,
    symlens_associator,
    symlens_left_unitor,
    symlens_right_unitor,
)
from deltalens.lenses import (
    Cofunctor,
    MealyMorphism,
    check_lens,
    cofunctor_span_rep,
    diagram_to_lens,
    lens_diagram_rep,
    mealy_span_rep,
    span_to_cofunctor,
    span_to_mealy,
)
from deltalens.pushout import pushout_ioo
from deltalens.testgen import (
    CYCLE2,
    DISC2,
    IDEM,
    ONE,
    PAR2,
    THREE,
    TWO,
    GenConfig,
    derive_seed,
    gen_cofunctor,
    gen_lens,
    gen_mealy,
    gen_span,
    gen_symlens,
)

RESULTS = []

BASES = [ONE, TWO, DISC2, IDEM, PAR2, THREE, CYCLE2]
FIXTURE_PAIRS = [(ONE, TWO), (TWO, TWO), (IDEM, TWO), (PAR2, DISC2), (THREE, TWO), (CYCLE2, IDEM)]


def judge(n, title, limit, body):
    start = time.perf_counter()
    error = None
    try:
        body()
    except AssertionError as e:
        error = e
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < limit
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {title} ({elapsed:.2f}s, limit {limit}s)"
    RESULTS.append(line)
    print(line)
    if error is not None:
        raise error
    assert elapsed < limit, line


def bases(seed, k):
    rng = random.Random(seed)
    return [rng.choice(BASES)() for _ in range(k)]


def raises_axiom(axiom, make):
    try:
        make()
    except AxiomViolation as e:
        return e.axiom == axiom
    return False


# -- 1 ------------------------------------------------------------------------------


def violating_fixtures():
    wide = from_arrows(
        ["0", "1", "2"], {"a": ("0", "1"), "b": ("1", "2"), "ba": ("0", "2"), "c": ("0", "2")}, {("b", "a"): "ba"}
    )
    lift3 = {(wide.src(u), u): u for u in THREE().morphisms}
    lift3[("0", "ba")] = "c"
    return [
        (1, lambda: Cofunctor(TWO(), TWO(), {"0": "0", "1": "1"}, {("0", "id0"): "id0", ("0", "u"): "id0", ("1", "id1"): "id1"})),
        (2, lambda: Cofunctor(IDEM(), IDEM(), {"*": "*"}, {("*", "id*"): "e", ("*", "e"): "e"})),
        (3, lambda: Cofunctor(THREE(), wide, {a: a for a in "012"}, lift3)),
        (0, lambda: Cofunctor(TWO(), TWO(), {"0": "0", "1": "1"}, {("0", "id0"): "id0", ("1", "id1"): "id1"})),
        (2, lambda: check_lens(Functor.identity(IDEM()), {"*": "*"}, {("*", "id*"): "e", ("*", "e"): "e"})),
        (1, lambda: MealyMorphism(
            TWO(), ONE(), ["x", "y"], {"x": "0", "y": "1"}, {"x": "*", "y": "*"},
            {("x", "id0"): "x", ("x", "u"): "x", ("y", "id1"): "y"},
            {("x", "id0"): "id*", ("x", "u"): "id*", ("y", "id1"): "id*"},
        )),
        (2, lambda: MealyMorphism(
            ONE(), ONE(), ["x", "y"], {"x": "*", "y": "*"}, {"x": "*", "y": "*"},
            {("x", "id*"): "y", ("y", "id*"): "x"}, {("x", "id*"): "id*", ("y", "id*"): "id*"},
        )),
        (3, lambda: MealyMorphism(
            IDEM(), ONE(), ["x", "y"], {"x": "*", "y": "*"}, {"x": "*", "y": "*"},
            {("x", "id*"): "x", ("y", "id*"): "y", ("x", "e"): "y", ("y", "e"): "x"},
            {k: "id*" for k in [("x", "id*"), ("y", "id*"), ("x", "e"), ("y", "e")]},
        )),
    ]


def test_criterion_1_law_suites():
    def body():
        for seed in range(100):
            A, B = bases(seed, 2)
            cfg = GenConfig(seed=seed)
            gen_cofunctor(cfg, B).validate()
            gen_mealy(cfg, A, B).validate()
            gen_lens(cfg, B).validate()
            A, B = (random.Random(seed).choice(cases.SMALL)() for _ in range(2))
            gen_span(cfg, A, B).validate()
            gen_symlens(cfg, A, B).validate()
        for axiom, make in violating_fixtures():
            assert raises_axiom(axiom, make), axiom

    judge(1, "law suites and violating fixtures", 10, body)


# -- 2 ------------------------------------------------------------------------------


def test_criterion_2_representation_roundtrips():
    def body():
        for seed in range(100):
            A, B = bases(seed, 2)
            cfg = GenConfig(seed=seed)
            c = gen_cofunctor(cfg, B)
            span = cofunctor_span_rep(c)
            assert classify_functor(span.opfibration).is_discrete_opfibration
            assert span_to_cofunctor(span) == c
            m = gen_mealy(cfg, A, B)
            mspan = mealy_span_rep(m)
            assert classify_functor(mspan.left).is_discrete_opfibration
            assert span_to_mealy(mspan) == m
            lens = gen_lens(cfg, B)
            d = lens_diagram_rep(lens)
            assert classify_functor(d.opfibration).is_discrete_opfibration
            assert diagram_to_lens(d) == lens

    judge(2, "representation round-trips", 10, body)


# -- 3 ------------------------------------------------------------------------------


def test_criterion_3_product_universal_property():
    def body():
        spans = cases.cospans()
        assert len(spans) >= 10
        for l1, l2 in spans:
            for C in (l1.source, l2.source, l1.view):
                assert len(C.objects) <= 3
            prod, p0, p1 = lensB_product(l1, l2)
            legs = (p0.ob, p0.mor), (p1.ob, p1.mor)
            for cone in cases.cones_over(l1.view) + [l1, l2]:
                mediators = brute.lens_homs(cone, prod)
                for h1 in brute.lens_homs(cone, l1):
                    for h2 in brute.lens_homs(cone, l2):
                        hits = [
                            m for m in mediators
                            if brute.compose_maps(m, legs[0]) == h1 and brute.compose_maps(m, legs[1]) == h2
                        ]
                        assert len(hits) == 1

    judge(3, "product universal property by mediator enumeration", 60, body)


# -- 4 ------------------------------------------------------------------------------


def test_criterion_4_fake_pullback_forgets_to_pullback():
    def body():
        for l, r in cases.random_cospans(50):
            cone = fake_pullback(l, r)
            assert (cone.apex, cone.left.get, cone.right.get) == pullback(l.get, r.get)

    judge(4, "fake pullback forgets to the pullback", 10, body)


# -- 5 ------------------------------------------------------------------------------


def adjunction_instances(A, B, n=50, seed=0):
    syms = [gen_symlens(GenConfig(seed=derive_seed(seed, "symlens", i)), A, B) for i in range(n)]
    spans = [gen_span(GenConfig(seed=derive_seed(seed, "span", i)), A, B) for i in range(n)]
    return syms, spans


def test_criterion_5_adjoint_triple():
    def body():
        saturated = total = 0
        for make_a, make_b in FIXTURE_PAIRS:
            A, B = make_a(), make_b()
            syms, spans = adjunction_instances(A, B)
            report = verify_adjunctions(A, B, syms, spans)
            assert report.passed, (make_a.__name__, make_b.__name__, report.checks)
            for name in ("MR-identity", "unit-is-2cell", "triangle-1", "hom-bijection"):
                assert report.checks[name] == "PASS", name
            generated = [r for r in report.instances if not r.instance.startswith("pair")]
            total += len(generated)
            saturated += sum(r.saturated for r in generated)
        assert saturated / total >= 0.8, saturated / total

    judge(5, "adjoint triple on generated instances", 120, body)


# -- 6 ------------------------------------------------------------------------------


def test_criterion_6_characterisations():
    def body():
        counterexamples = 0
        for make_a, make_b in FIXTURE_PAIRS:
            A, B = make_a(), make_b()
            _, spans = adjunction_instances(A, B, n=20, seed=1)
            for t in spans:
                if is_invertible_2cell(unit_MR(t)) != get_pairing_is_fully_faithful(t):
                    counterexamples += 1
                try:
                    counit = counit_LM(t)
                except LInapplicableAtBound:
                    continue
                if is_invertible_2cell(counit) != is_l_image(t):
                    counterexamples += 1
        assert counterexamples == 0

    judge(6, "reflective and coreflective characterisations", 60, body)


# -- 7 ------------------------------------------------------------------------------


def test_criterion_7_bicategory_sanity():
    def body():
        for s1, s2, s3 in cases.span_triples(20, seed=7):
            assert is_invertible_2cell(spnlens_associator(s1, s2, s3))
            assert is_invertible_2cell(spnlens_left_unitor(s1))
            assert is_invertible_2cell(spnlens_right_unitor(s1))
        for s1, s2, s3 in cases.symlens_triples(20, seed=7):
            assert is_invertible_sym_2cell(symlens_associator(s1, s2, s3))
            assert is_invertible_sym_2cell(symlens_left_unitor(s1))
            assert is_invertible_sym_2cell(symlens_right_unitor(s1))

    judge(7, "associators and unitors are invertible", 60, body)


# -- 8 ------------------------------------------------------------------------------


def test_criterion_8_pushout_infiniteness():
    def body():
        totals = []
        for bound in range(1, 9):
            with pytest.raises(NotSaturated) as err:
                pushout_ioo(["*"], IDEM(), IDEM(), bound)
            assert err.value.bound == bound
            totals.append(sum(err.value.word_counts))
        assert all(a < b for a, b in zip(totals, totals[1:])), totals

    judge(8, "IDEM pushout never saturates", 5, body)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
