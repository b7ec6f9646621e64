import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from deltalens.category import (
    FinCat,
    Functor,
    boff_factorize,
    boff_fill,
    classify_functor,
    count_functors,
    enumerate_functors,
    find_isomorphism,
    from_arrows,
    pairing,
    product,
    pullback,
    subcategory_generated,
    to_terminal,
    validate_functor,
)
from deltalens.errors import EndpointMismatch, LawViolation, MissingComposite, NotAFunctor, PreconditionViolated
from deltalens.testgen import GenConfig, ONE, PAR2, THREE, TWO, gen_category, FIXTURES


def inclusion_of_one():
    """The functor picking out object 1 of TWO."""
    point = from_arrows(["1"], {})
    return Functor(point, TWO(), {"1": "1"}, {"id1": "id1"})


def collapse(C):
    return to_terminal(C, ONE())


# -- validation ----------------------------------------------------------------------


def test_one_is_valid():
    C = ONE().validate()
    assert C.objects == ("*",) and list(C.morphisms) == ["id*"]


def test_missing_composite():
    C = TWO()
    table = dict(C.composition)
    del table[("u", "id0")]
    with pytest.raises(MissingComposite):
        FinCat(C.objects, C.morphisms, C.identities, table)


def test_endpoint_mismatch():
    C = TWO()
    table = dict(C.composition)
    table[("u", "id1")] = "u"
    with pytest.raises(EndpointMismatch):
        FinCat(C.objects, C.morphisms, C.identities, table)


def test_unit_law_violation():
    C = PAR2()
    table = dict(C.composition)
    table[("id1", "u")] = "v"
    with pytest.raises(LawViolation) as err:
        FinCat(C.objects, C.morphisms, C.identities, table)
    assert err.value.witness == ("left-unit", "u")


def test_associativity_violation():
    # one object, a and b with every composite of length two equal to a
    objs = ["*"]
    mors = {"id": ("*", "*"), "a": ("*", "*"), "b": ("*", "*")}
    table = {("id", x): x for x in mors} | {(x, "id"): x for x in mors}
    table |= {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "a", ("b", "b"): "b"}
    FinCat(objs, mors, {"*": "id"}, table)
    table[("b", "b")] = "a"
    table[("a", "b")] = "b"
    with pytest.raises(LawViolation):
        FinCat(objs, mors, {"*": "id"}, table)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_valid(name):
    FIXTURES[name]().validate()


# -- functors ------------------------------------------------------------------------


def test_identity_functor_on_two():
    Functor.identity(TWO()).validate()


def test_collapse_is_functor():
    validate_functor(TWO(), ONE(), {"0": "*", "1": "*"}, {"id0": "id*", "id1": "id*", "u": "id*"})


def test_target_not_preserved():
    with pytest.raises(NotAFunctor) as err:
        validate_functor(TWO(), TWO(), {"0": "0", "1": "1"}, {"id0": "id0", "id1": "id1", "u": "id0"})
    assert err.value.law == "target"


def test_composition_not_preserved():
    # THREE into a chain with an extra arrow c: 0 -> 2 parallel to the composite
    D = from_arrows(
        ["0", "1", "2"],
        {"a": ("0", "1"), "b": ("1", "2"), "ba": ("0", "2"), "c": ("0", "2")},
        {("b", "a"): "ba"},
    )
    ob = {a: a for a in "012"}
    mor = {u: u for u in THREE().morphisms}
    validate_functor(THREE(), D, ob, mor)
    with pytest.raises(NotAFunctor) as err:
        validate_functor(THREE(), D, ob, {**mor, "ba": "c"})
    assert err.value.law == "composition"


# -- classification --------------------------------------------------------------------


def test_classify_identity():
    c = classify_functor(Functor.identity(TWO()))
    assert c.is_discrete_opfibration and c.is_bijective_on_objects and c.is_fully_faithful
    assert c.failure_witness == {}


def test_classify_collapse():
    c = classify_functor(collapse(TWO()))
    assert not c.is_discrete_opfibration
    assert not c.is_bijective_on_objects
    assert not c.is_fully_faithful
    # at object 0 both id0 and u lift id*
    assert c.dof_witness == ("0", "id*")
    assert brute.lifts(collapse(TWO()), "0", "id*") == ["id0", "u"]
    assert c.ff_witness is not None


def test_classify_point_inclusion():
    c = classify_functor(inclusion_of_one())
    assert c.is_discrete_opfibration and c.is_fully_faithful
    assert not c.is_bijective_on_objects


def _random_functors(n):
    out = []
    for seed in range(n):
        rng = random.Random(seed)
        C = gen_category(GenConfig(seed=seed, max_objects=3, max_generators=2))
        D = gen_category(GenConfig(seed=seed + 1000, max_objects=2, max_generators=2))
        F = next(enumerate_functors(C, D, rng=rng), None)
        if F is not None:
            out.append(F)
    return out


def test_classification_agrees_with_naive_count():
    for F in _random_functors(60):
        c = classify_functor(F)
        assert c.is_discrete_opfibration == brute.is_dof(F)
        assert c.is_fully_faithful == brute.is_ff(F)
        assert c.is_bijective_on_objects == brute.is_bo(F)


# -- bo-ff factorisation -----------------------------------------------------------------


def test_boff_identity():
    F = Functor.identity(TWO())
    e, image, m = boff_factorize(F)
    assert find_isomorphism(image, TWO()) is not None
    assert len(image.morphisms) == 3


def test_boff_collapse_is_indiscrete():
    e, image, m = boff_factorize(collapse(TWO()))
    assert sorted(image.morphisms) == sorted((a, "id*", b) for a in "01" for b in "01")


def test_boff_point_inclusion():
    e, image, m = boff_factorize(inclusion_of_one())
    assert list(image.morphisms) == [("1", "id1", "1")]
    assert m.ob == {"1": "1"}


def test_boff_properties_on_random_functors():
    for F in _random_functors(60):
        e, image, m = boff_factorize(F)
        image.validate()
        assert e.then(m).same_maps(F)
        assert e.is_identity_on_objects
        assert brute.is_ff(m)


def test_fill_with_identity_sides():
    F = collapse(TWO())
    e, image, m = boff_factorize(F)
    ident_e = Functor.identity(TWO())
    assert boff_fill(ident_e, m, e, F).same_maps(e)
    ident_m = Functor.identity(ONE())
    assert boff_fill(e, ident_m, F, m).same_maps(m)


def test_fill_unique_by_brute_force():
    # e: TWO -> indiscrete on {0,1}, m: {1} -> TWO
    e, image, _ = boff_factorize(collapse(TWO()))
    m = inclusion_of_one()
    point = m.dom
    f = Functor(TWO(), point, {"0": "1", "1": "1"}, {"id0": "id1", "id1": "id1", "u": "id1"})
    g = Functor(image, TWO(), {"0": "1", "1": "1"}, {w: "id1" for w in image.morphisms})
    h = boff_fill(e, m, f, g)
    good = [
        (ob, mor)
        for ob, mor in brute.all_functors(image, point)
        if brute.compose_maps((e.ob, e.mor), (ob, mor)) == (f.ob, f.mor)
        and brute.compose_maps((ob, mor), (m.ob, m.mor)) == (g.ob, g.mor)
    ]
    assert good == [(h.ob, h.mor)]


def test_fill_rejects_noncommuting_square():
    e, image, m = boff_factorize(collapse(TWO()))
    f = Functor.identity(TWO())
    g = Functor(image, ONE(), {"0": "*", "1": "*"}, {w: "id*" for w in image.morphisms})
    with pytest.raises(PreconditionViolated):
        boff_fill(e, Functor.identity(ONE()), f, g)


def test_fill_unique_on_random_squares():
    checked = 0
    for F in _random_functors(40):
        if len(F.dom.objects) > 3:
            continue
        e, image, m = boff_factorize(F)
        # the square F = m ∘ e against itself: the filler must be the identity
        h = boff_fill(e, m, e, m)
        sols = [
            (ob, mor)
            for ob, mor in brute.all_functors(image, image)
            if brute.compose_maps((e.ob, e.mor), (ob, mor)) == (e.ob, e.mor)
            and brute.compose_maps((ob, mor), (m.ob, m.mor)) == (m.ob, m.mor)
        ]
        assert sols == [(h.ob, h.mor)]
        checked += 1
    assert checked >= 10


# -- pullbacks ---------------------------------------------------------------------------


def test_pullback_of_identities_is_diagonal():
    C = THREE()
    P, p0, p1 = pullback(Functor.identity(C), Functor.identity(C))
    assert sorted(P.objects) == [(a, a) for a in sorted(C.objects)]
    assert find_isomorphism(P, C) is not None


def test_pullback_over_terminal_is_product():
    P, _, _ = pullback(collapse(TWO()), collapse(TWO()))
    assert len(P.objects) == 4
    assert len(P.morphisms) == 9


def test_pullback_with_identity_leg():
    F = collapse(TWO())
    P, p0, p1 = pullback(F, Functor.identity(ONE()))
    assert find_isomorphism(P, TWO()) is not None


def _cone_count(F, G, P, p0, p1, X):
    """Number of mediators for every cone from X, checked naively."""
    counts = []
    for ob0, mor0 in brute.all_functors(X, F.dom):
        for ob1, mor1 in brute.all_functors(X, G.dom):
            if brute.compose_maps((ob0, mor0), (F.ob, F.mor)) != brute.compose_maps((ob1, mor1), (G.ob, G.mor)):
                continue
            n = 0
            for ob, mor in brute.all_functors(X, P):
                if brute.compose_maps((ob, mor), (p0.ob, p0.mor)) == (ob0, mor0) and brute.compose_maps(
                    (ob, mor), (p1.ob, p1.mor)
                ) == (ob1, mor1):
                    n += 1
            counts.append(n)
    return counts


@pytest.mark.parametrize("X", [ONE, TWO, PAR2])
def test_pullback_universal_property(X):
    F = collapse(TWO())
    G = to_terminal(PAR2(), ONE())
    P, p0, p1 = pullback(F, G)
    counts = _cone_count(F, G, P, p0, p1, X())
    assert counts and set(counts) == {1}


def test_pullback_universal_property_random():
    rng = random.Random(5)
    done = 0
    for seed in range(30):
        A = gen_category(GenConfig(seed=seed, max_objects=2, max_generators=2))
        B = gen_category(GenConfig(seed=seed + 50, max_objects=2, max_generators=2))
        C = gen_category(GenConfig(seed=seed + 99, max_objects=2, max_generators=1))
        F = next(enumerate_functors(A, C, rng=rng), None)
        G = next(enumerate_functors(B, C, rng=rng), None)
        if F is None or G is None:
            continue
        P, p0, p1 = pullback(F, G)
        P.validate()
        for X in (ONE(), TWO()):
            assert set(_cone_count(F, G, P, p0, p1, X)) <= {1}
        done += 1
    assert done >= 10


def test_product_pairing():
    P, p0, p1 = product(TWO(), THREE())
    F = Functor.identity(TWO())
    G = next(enumerate_functors(TWO(), THREE()))
    h = pairing(F, G, P)
    assert h.then(p0).same_maps(F) and h.then(p1).same_maps(G)


# -- enumeration -------------------------------------------------------------------------


@pytest.mark.parametrize("c, d", list(itertools.product(["ONE", "TWO", "PAR2", "IDEM", "THREE"], repeat=2)))
def test_enumeration_matches_naive(c, d):
    C, D = FIXTURES[c](), FIXTURES[d]()
    fast = sorted(repr(sorted(F.mor.items())) for F in enumerate_functors(C, D))
    slow = sorted(repr(sorted(mor.items())) for _, mor in brute.all_functors(C, D))
    assert fast == slow
    assert count_functors(C, D) == len(slow)


def test_subcategory_generated():
    C = THREE()
    S = subcategory_generated(C, ["a", "b"])
    assert S == C
    S = subcategory_generated(C, ["a"])
    assert sorted(S.non_identities()) == ["a"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_generated_categories_validate(seed):
    gen_category(GenConfig(seed=seed)).validate()
