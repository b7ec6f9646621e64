"""The adjoint triple L ⊣ M ⊣ R between symmetric lenses and spans of lenses.

``apply_M`` reads a symmetric lens off a span, ``apply_R`` rebuilds a span
through the image of the anchor pairing and ``apply_L`` through the pushout
of the two transition categories.  ``verify_adjunctions`` checks every
identity the triple is supposed to satisfy on concrete instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .category import (
    FinCat,
    Functor,
    boff_factorize,
    boff_fill,
    discrete,
    is_fully_faithful,
    pairing,
    product,
)
from .errors import LInapplicableAtBound, NotSaturated, PreconditionViolated
from .homcats import (
    LensSpan,
    SpanLensMorphism,
    SymLensMorphism,
    SymmetricLens,
    compose_2cells,
    enumerate_span_2cells,
    enumerate_sym_2cells,
    find_span_isomorphism,
    identity_2cell,
    is_invertible_2cell,
    spnlens_2cell,
    symlens_2cell,
)
from .lenses import Cofunctor, Lens, MealyMorphism, mealy_span_rep
from .pushout import DEFAULT_BOUND, copair, pushout_ioo

# -- M ----------------------------------------------------------------------------


def apply_M(t: LensSpan) -> SymmetricLens:
    """Symmetric lens whose transitions are the puts of ``t`` and outputs their images."""
    X = t.apex
    g, gamma = t.left.get, t.left.put
    f, phi = t.right.get, t.right.put
    forward = MealyMorphism(
        t.A,
        t.B,
        X.objects,
        dict(g.ob),
        dict(f.ob),
        {k: X.tgt(w) for k, w in gamma.lift.items()},
        {k: f.mor[w] for k, w in gamma.lift.items()},
        check=False,
    )
    backward = MealyMorphism(
        t.B,
        t.A,
        X.objects,
        dict(f.ob),
        dict(g.ob),
        {k: X.tgt(w) for k, w in phi.lift.items()},
        {k: g.mor[w] for k, w in phi.lift.items()},
        check=False,
    )
    return SymmetricLens(forward, backward, check=False)


def map_M(cell: SpanLensMorphism) -> SymLensMorphism:
    return symlens_2cell(dict(cell.h.ob), apply_M(cell.source), apply_M(cell.target))


# -- R ----------------------------------------------------------------------------


@dataclass
class RConstruction:
    """Intermediate data of the right adjoint at one symmetric lens."""

    span: LensSpan
    states: FinCat
    image: FinCat
    e: Functor
    m: Functor
    sigma: Functor
    tau: Functor
    product: FinCat


def _discrete_inclusion(X0: FinCat, X: FinCat) -> Functor:
    return Functor(X0, X, {x: x for x in X0.objects}, {X0.id(x): X.id(x) for x in X0.objects}, check=False)


def r_construction(s: SymmetricLens) -> RConstruction:
    A, B = s.A, s.B
    AB, pA, pB = product(A, B)
    X0 = discrete(s.states)
    anchors = Functor(
        X0,
        AB,
        {x: (s.left_anchor[x], s.right_anchor[x]) for x in s.states},
        {X0.id(x): (A.id(s.left_anchor[x]), B.id(s.right_anchor[x])) for x in s.states},
        check=False,
    )
    e, image, m = boff_factorize(anchors)
    plus = mealy_span_rep(s.forward)
    minus = mealy_span_rep(s.backward)
    sigma = boff_fill(_discrete_inclusion(X0, plus.apex), m, e, pairing(plus.left, plus.right, AB))
    tau = boff_fill(_discrete_inclusion(X0, minus.apex), m, e, pairing(minus.right, minus.left, AB))
    get_a, get_b = m.then(pA), m.then(pB)
    put_a = Cofunctor(A, image, dict(get_a.ob), {k: sigma.mor[k] for k in s.forward.transition}, check=False)
    put_b = Cofunctor(B, image, dict(get_b.ob), {k: tau.mor[k] for k in s.backward.transition}, check=False)
    span = LensSpan(image, Lens(get_a, put_a, check=False), Lens(get_b, put_b, check=False))
    return RConstruction(span, X0, image, e, m, sigma, tau, AB)


def apply_R(s: SymmetricLens) -> LensSpan:
    return r_construction(s).span


def map_R(cell: SymLensMorphism) -> SpanLensMorphism:
    """Extend a state map to the images by the bo-ff lifting property."""
    src, tgt = r_construction(cell.source), r_construction(cell.target)
    on_states = Functor(
        src.states,
        tgt.states,
        dict(cell.state_map),
        {src.states.id(x): tgt.states.id(y) for x, y in cell.state_map.items()},
        check=False,
    )
    h = boff_fill(src.e, tgt.m, on_states.then(tgt.e), src.m)
    return spnlens_2cell(h, src.span, tgt.span)


def unit_MR(t: LensSpan) -> SpanLensMorphism:
    """The unit ``t -> R M t``: each morphism goes to its pair of images."""
    rc = r_construction(apply_M(t))
    X0 = rc.states
    pair = pairing(t.left.get, t.right.get, rc.product)
    h = boff_fill(_discrete_inclusion(X0, t.apex), rc.m, rc.e, pair)
    return spnlens_2cell(h, t, rc.span)


# -- L ----------------------------------------------------------------------------


@dataclass
class LConstruction:
    span: LensSpan
    presented: object
    plus: FinCat
    minus: FinCat
    iota_plus: Functor
    iota_minus: Functor


def l_construction(s: SymmetricLens, bound: int = DEFAULT_BOUND) -> LConstruction:
    plus = mealy_span_rep(s.forward)
    minus = mealy_span_rep(s.backward)
    try:
        P, i0, i1 = pushout_ioo(s.states, plus.apex, minus.apex, bound)
    except NotSaturated as exc:
        raise LInapplicableAtBound(exc.bound, exc.word_counts) from exc
    cat = i0.cod
    get_a = copair(P, cat, plus.left, minus.right)
    get_b = copair(P, cat, plus.right, minus.left)
    put_a = Cofunctor(s.A, cat, dict(get_a.ob), {k: i0.mor[k] for k in s.forward.transition}, check=False)
    put_b = Cofunctor(s.B, cat, dict(get_b.ob), {k: i1.mor[k] for k in s.backward.transition}, check=False)
    span = LensSpan(cat, Lens(get_a, put_a, check=False), Lens(get_b, put_b, check=False))
    return LConstruction(span, P, plus.apex, minus.apex, i0, i1)


def apply_L(s: SymmetricLens, bound: int = DEFAULT_BOUND) -> LensSpan:
    return l_construction(s, bound).span


def map_L(cell: SymLensMorphism, bound: int = DEFAULT_BOUND) -> SpanLensMorphism:
    """Extend a state map letter by letter to the pushouts."""
    src, tgt = apply_L(cell.source, bound), apply_L(cell.target, bound)
    m = cell.state_map

    def on_word(w):
        x, word = w
        return m[x], tuple((side, (m[y], u)) for side, (y, u) in word)

    h = Functor(src.apex, tgt.apex, {x: m[x] for x in src.apex.objects}, {w: on_word(w) for w in src.apex.morphisms})
    return spnlens_2cell(h, src, tgt)


def counit_LM(t: LensSpan, bound: int = DEFAULT_BOUND) -> SpanLensMorphism:
    """The counit ``L M t -> t``, sending each letter to the put it came from."""
    lc = l_construction(apply_M(t), bound)
    X = t.apex
    on_plus = Functor(lc.plus, X, {x: x for x in X.objects}, {k: t.left.put.lift[k] for k in lc.plus.morphisms}, check=False)
    on_minus = Functor(lc.minus, X, {x: x for x in X.objects}, {k: t.right.put.lift[k] for k in lc.minus.morphisms}, check=False)
    h = copair(lc.presented, lc.span.apex, on_plus, on_minus)
    return spnlens_2cell(h, lc.span, t)


def map_on_2cell(which: str, cell, bound: int = DEFAULT_BOUND):
    if which == "M":
        return map_M(cell)
    if which == "R":
        return map_R(cell)
    if which == "L":
        return map_L(cell, bound)
    raise PreconditionViolated(f"unknown functor {which!r}")


# -- characterisations ------------------------------------------------------------


def get_pairing_is_fully_faithful(t: LensSpan) -> bool:
    AB, _, _ = product(t.A, t.B)
    return is_fully_faithful(pairing(t.left.get, t.right.get, AB))


def is_l_image(t: LensSpan, bound: int = DEFAULT_BOUND) -> bool:
    """Is ``t`` isomorphic to ``L s`` for some symmetric lens ``s``?

    Any such ``s`` is isomorphic to ``M t``, so it suffices to search for an
    invertible 2-cell ``L M t -> t`` among all 2-cells.
    """
    return find_span_isomorphism(apply_L(apply_M(t), bound), t) is not None


# -- triangle identities, naturality, hom-set bijections ----------------------------------


def triangle_MR_at_span(t: LensSpan) -> bool:
    """``M`` of the unit at ``t`` is the identity state map."""
    cell = map_M(unit_MR(t))
    return cell.ok and all(x == y for x, y in cell.state_map.items())


def triangle_MR_at_symlens(s: SymmetricLens) -> bool:
    """The unit at ``R s`` is the identity 2-cell."""
    r = apply_R(s)
    cell = unit_MR(r)
    return cell.ok and cell.target == r and cell.h.same_maps(Functor.identity(r.apex))


def triangle_LM_at_span(t: LensSpan, bound: int = DEFAULT_BOUND) -> bool:
    cell = map_M(counit_LM(t, bound))
    return cell.ok and all(x == y for x, y in cell.state_map.items())


def triangle_LM_at_symlens(s: SymmetricLens, bound: int = DEFAULT_BOUND) -> bool:
    """The counit at ``L s`` is the identity 2-cell."""
    l = apply_L(s, bound)
    cell = counit_LM(l, bound)
    return cell.ok and cell.source == l and cell.h.same_maps(Functor.identity(l.apex))


def unit_naturality(cell: SpanLensMorphism) -> bool:
    lhs = cell.h.then(unit_MR(cell.target).h)
    rhs = unit_MR(cell.source).h.then(map_R(map_M(cell)).h)
    return lhs.same_maps(rhs)


def counit_naturality(cell: SpanLensMorphism, bound: int = DEFAULT_BOUND) -> bool:
    lhs = map_L(map_M(cell), bound).h.then(counit_LM(cell.target, bound).h)
    rhs = counit_LM(cell.source, bound).h.then(cell.h)
    return lhs.same_maps(rhs)


@dataclass
class BijectionResult:
    left_count: int
    right_count: int
    round_trip: bool

    @property
    def ok(self) -> bool:
        return self.left_count == self.right_count and self.round_trip


def hom_bijection_LM(s: SymmetricLens, t: LensSpan, bound: int = DEFAULT_BOUND) -> BijectionResult:
    """Compare 2-cells ``L s -> t`` with 2-cells ``s -> M t``."""
    ls, mt = apply_L(s, bound), apply_M(t)
    counit = counit_LM(t, bound)
    spans = list(enumerate_span_2cells(ls, t))
    syms = list(enumerate_sym_2cells(s, mt))

    def to_sym(c):
        return symlens_2cell(dict(c.h.ob), s, mt)

    def to_span(c):
        return compose_2cells(map_L(c, bound), counit)

    ok = True
    for c in spans:
        d = to_sym(c)
        back = to_span(d)
        ok &= d.ok and back.ok and back.h.same_maps(c.h)
    for c in syms:
        d = to_span(c)
        back = to_sym(d)
        ok &= d.ok and back.ok and back.state_map == c.state_map
    return BijectionResult(len(spans), len(syms), ok)


def hom_bijection_MR(t: LensSpan, s: SymmetricLens) -> BijectionResult:
    """Compare 2-cells ``M t -> s`` with 2-cells ``t -> R s``."""
    mt, rs = apply_M(t), apply_R(s)
    unit = unit_MR(t)
    syms = list(enumerate_sym_2cells(mt, s))
    spans = list(enumerate_span_2cells(t, rs))

    def to_span(c):
        return compose_2cells(unit, map_R(c))

    def to_sym(c):
        return symlens_2cell(dict(c.h.ob), mt, s)

    ok = True
    for c in syms:
        d = to_span(c)
        back = to_sym(d)
        ok &= d.ok and back.ok and back.state_map == c.state_map
    for c in spans:
        d = to_sym(c)
        back = to_span(d)
        ok &= d.ok and back.ok and back.h.same_maps(c.h)
    return BijectionResult(len(syms), len(spans), ok)


# -- reports ----------------------------------------------------------------------------

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

CHECK_NAMES = (
    "MR-identity",
    "ML-identity",
    "unit-is-2cell",
    "counit-is-2cell",
    "triangle-1",
    "triangle-2",
    "naturality",
    "hom-bijection",
    "reflective-characterisation",
    "coreflective-characterisation",
)


@dataclass
class InstanceResult:
    instance: str
    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    saturated: bool = True


@dataclass
class AdjunctionReport:
    instances: list = field(default_factory=list)

    @property
    def checks(self) -> dict:
        out = {}
        for name in CHECK_NAMES:
            statuses = [r.checks[name] for r in self.instances if name in r.checks]
            if any(st == FAIL for st in statuses):
                out[name] = FAIL
            elif any(st == PASS for st in statuses):
                out[name] = PASS
            else:
                out[name] = SKIP
        return out

    @property
    def passed(self) -> bool:
        return all(st != FAIL for st in self.checks.values())

    @property
    def saturation_rate(self) -> float:
        if not self.instances:
            return 1.0
        return sum(r.saturated for r in self.instances) / len(self.instances)

    def to_json(self) -> dict:
        return {
            "checks": self.checks,
            "passed": self.passed,
            "saturation_rate": round(self.saturation_rate, 6),
            "instances": [
                {"instance": r.instance, "saturated": r.saturated, "checks": dict(sorted(r.checks.items())), "witnesses": r.witnesses}
                for r in self.instances
            ],
        }


def _record(result: InstanceResult, name: str, ok: bool, witness=None):
    prev = result.checks.get(name)
    status = PASS if ok else FAIL
    if prev == FAIL:
        return
    result.checks[name] = status
    if not ok and witness is not None:
        result.witnesses[name] = witness


def check_symlens_instance(name: str, s: SymmetricLens, bound: int = DEFAULT_BOUND) -> InstanceResult:
    res = InstanceResult(name)
    r = apply_R(s)
    _record(res, "MR-identity", apply_M(r) == s)
    _record(res, "triangle-1", triangle_MR_at_symlens(s), "unit at R(s) is not the identity")
    _record(res, "unit-is-2cell", unit_MR(r).ok)
    _record(res, "reflective-characterisation", get_pairing_is_fully_faithful(r))
    try:
        l = apply_L(s, bound)
    except LInapplicableAtBound:
        res.saturated = False
        for key in ("ML-identity", "counit-is-2cell"):
            res.checks.setdefault(key, SKIP)
        return res
    _record(res, "ML-identity", apply_M(l) == s)
    _record(res, "counit-is-2cell", counit_LM(l, bound).ok)
    _record(res, "triangle-2", triangle_LM_at_symlens(s, bound), "counit at L(s) is not the identity")
    return res


def check_span_instance(name: str, t: LensSpan, bound: int = DEFAULT_BOUND) -> InstanceResult:
    res = InstanceResult(name)
    unit = unit_MR(t)
    _record(res, "unit-is-2cell", unit.ok, unit.witness)
    _record(res, "triangle-1", triangle_MR_at_span(t))
    _record(res, "naturality", unit_naturality(identity_2cell(t)) and unit_naturality(unit))
    _record(
        res,
        "reflective-characterisation",
        is_invertible_2cell(unit) == get_pairing_is_fully_faithful(t),
    )
    try:
        counit = counit_LM(t, bound)
    except LInapplicableAtBound:
        res.saturated = False
        res.checks.setdefault("counit-is-2cell", SKIP)
        return res
    _record(res, "counit-is-2cell", counit.ok, counit.witness)
    _record(res, "triangle-2", triangle_LM_at_span(t, bound))
    _record(res, "naturality", counit_naturality(identity_2cell(t), bound) and counit_naturality(counit, bound))
    _record(res, "coreflective-characterisation", is_invertible_2cell(counit) == is_l_image(t, bound))
    return res


def check_pair_instance(name: str, s: SymmetricLens, t: LensSpan, bound: int = DEFAULT_BOUND) -> InstanceResult:
    """Both local hom-set bijections for one symmetric lens and one span."""
    res = InstanceResult(name)
    mr = hom_bijection_MR(t, s)
    _record(res, "hom-bijection", mr.ok, ("M⊣R", mr.left_count, mr.right_count))
    try:
        apply_L(s, bound)
    except LInapplicableAtBound:
        res.saturated = False
        return res
    lm = hom_bijection_LM(s, t, bound)
    _record(res, "hom-bijection", lm.ok, ("L⊣M", lm.left_count, lm.right_count))
    return res


def verify_adjunctions(
    A: FinCat,
    B: FinCat,
    symlenses: Sequence[SymmetricLens] = (),
    spans: Sequence[LensSpan] = (),
    bound: int = DEFAULT_BOUND,
    pairs: Iterable[tuple] | None = None,
) -> AdjunctionReport:
    """Run every adjunction check on the given instances between ``A`` and ``B``.

    ``pairs`` defaults to matching the i-th symmetric lens with the i-th span
    and additionally with ``L`` / ``M`` images, so that the hom-set
    bijections are exercised on non-empty hom-sets.
    """
    for x in list(symlenses) + list(spans):
        if x.A != A or x.B != B:
            raise PreconditionViolated("instance does not run between the given categories")
    report = AdjunctionReport()
    for i, s in enumerate(symlenses):
        report.instances.append(check_symlens_instance(f"symlens[{i}]", s, bound))
    for i, t in enumerate(spans):
        report.instances.append(check_span_instance(f"span[{i}]", t, bound))
    if pairs is None:
        pairs = []
        for i, (s, t) in enumerate(zip(symlenses, spans)):
            pairs.append((f"pair[{i}]", s, t))
            pairs.append((f"pair[{i}]-M", apply_M(t), t))
            pairs.append((f"pair[{i}]-R", s, apply_R(s)))
    for name, s, t in pairs:
        report.instances.append(check_pair_instance(name, s, t, bound))
    return report
