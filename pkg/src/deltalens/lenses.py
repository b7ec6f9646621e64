"""Cofunctors, Mealy morphisms and asymmetric delta lenses.

All lifting and output data is kept in explicit finite tables keyed by
``(state, morphism)`` so that two structures are equal exactly when their
tables are.  Composition functions take their arguments in diagrammatic
order: ``compose_lens(l1, l2)`` runs ``l1`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .category import (
    FinCat,
    Functor,
    bo_witness,
    dof_witness,
    pullback,
    unique_lift,
)
from .errors import AxiomViolation, ObjectMismatch, PreconditionViolated, PutGetViolation, ShapeError


# -- cofunctors -----------------------------------------------------------------


class Cofunctor:
    """A cofunctor ``base ↛ total``.

    ``obj_map`` sends each object of ``total`` to an object of ``base`` and
    ``lift[(a, u)]`` is a morphism of ``total`` out of ``a`` for every ``u``
    in ``base`` leaving ``obj_map[a]``.
    """

    def __init__(self, base: FinCat, total: FinCat, obj_map: Mapping, lift: Mapping, *, check: bool = True):
        self.base = base
        self.total = total
        self.obj_map = dict(obj_map)
        self.lift = dict(lift)
        if check:
            self._check()

    def validate(self) -> "Cofunctor":
        self._check()
        return self

    def codomain_state(self, a, u):
        return self.total.tgt(self.lift[(a, u)])

    def _check(self):
        A, B = self.total, self.base
        for a in A.objects:
            if self.obj_map.get(a) not in B._out:
                raise AxiomViolation(0, f"object {a!r} not assigned to a base object", a)
        for a in A.objects:
            for u in B.out(self.obj_map[a]):
                w = self.lift.get((a, u))
                if w not in A.morphisms:
                    raise AxiomViolation(0, f"no lift of {u!r} at {a!r}", (a, u))
                if A.src(w) != a:
                    raise AxiomViolation(0, f"lift of {u!r} at {a!r} does not start at {a!r}", (a, u))
        for a in A.objects:
            for u in B.out(self.obj_map[a]):
                if self.obj_map[self.codomain_state(a, u)] != B.tgt(u):
                    raise AxiomViolation(1, f"lift of {u!r} at {a!r} ends over the wrong object", (a, u))
        for a in A.objects:
            if self.lift[(a, B.id(self.obj_map[a]))] != A.id(a):
                raise AxiomViolation(2, f"identity at {a!r} does not lift to an identity", a)
        for a in A.objects:
            for u in B.out(self.obj_map[a]):
                p = self.codomain_state(a, u)
                for v in B.out(B.tgt(u)):
                    lhs = self.lift[(a, B.comp(v, u))]
                    rhs = A.comp(self.lift[(p, v)], self.lift[(a, u)])
                    if lhs != rhs:
                        raise AxiomViolation(3, f"lift of {v!r} ∘ {u!r} at {a!r} is not the composite of lifts", (a, u, v))

    def __eq__(self, other):
        if not isinstance(other, Cofunctor):
            return NotImplemented
        return (
            self.obj_map == other.obj_map
            and self.lift == other.lift
            and self.base == other.base
            and self.total == other.total
        )

    __hash__ = None

    def __repr__(self):
        return f"Cofunctor({self.base!r} ↛ {self.total!r})"


def check_cofunctor(base: FinCat, total: FinCat, obj_map: Mapping, lift: Mapping) -> Cofunctor:
    return Cofunctor(base, total, obj_map, lift)


def identity_cofunctor(C: FinCat) -> Cofunctor:
    return Cofunctor(C, C, {a: a for a in C.objects}, {(C.src(u), u): u for u in C.morphisms}, check=False)


def compose_cofunctors(first: Cofunctor, second: Cofunctor) -> Cofunctor:
    """Composite of ``first: C ↛ B`` and ``second: B ↛ A`` as a cofunctor ``C ↛ A``.

    A morphism ``u`` at ``a`` is lifted to ``B`` by ``first`` and the result
    is lifted again by ``second``.
    """
    if first.total != second.base:
        raise PreconditionViolated("cofunctors are not composable")
    C, A = first.base, second.total
    obj_map = {a: first.obj_map[second.obj_map[a]] for a in A.objects}
    lift = {}
    for a in A.objects:
        b = second.obj_map[a]
        for u in C.out(obj_map[a]):
            lift[(a, u)] = second.lift[(a, first.lift[(b, u)])]
    return Cofunctor(C, A, obj_map, lift, check=False)


def discrete_opfibration_cofunctor(F: Functor) -> Cofunctor:
    """The cofunctor ``cod(F) ↛ dom(F)`` given by the unique lifts of ``F``."""
    w = dof_witness(F)
    if w is not None:
        raise ShapeError("functor is not a discrete opfibration", w)
    A, B = F.dom, F.cod
    lift = {(a, u): unique_lift(F, a, u) for a in A.objects for u in B.out(F.ob[a])}
    return Cofunctor(B, A, dict(F.ob), lift, check=False)


def bijective_on_objects_cofunctor(F: Functor) -> Cofunctor:
    """The cofunctor ``dom(F) ↛ cod(F)`` of a bijective-on-objects functor."""
    w = bo_witness(F)
    if w is not None:
        raise ShapeError("functor is not bijective on objects", w)
    back = {b: a for a, b in F.ob.items()}
    lift = {(F.ob[F.dom.src(u)], u): F.mor[u] for u in F.dom.morphisms}
    return Cofunctor(F.dom, F.cod, back, lift, check=False)


# -- Mealy morphisms ----------------------------------------------------------------


class MealyMorphism:
    """A Mealy morphism ``dom ↛ cod`` over the state set ``states``.

    ``transition[(x, u)]`` is the next state and ``output[(x, u)]`` the
    emitted morphism of ``cod`` for every ``u`` of ``dom`` leaving
    ``dom_anchor[x]``.
    """

    def __init__(
        self,
        dom: FinCat,
        cod: FinCat,
        states,
        dom_anchor: Mapping,
        cod_anchor: Mapping,
        transition: Mapping,
        output: Mapping,
        *,
        check: bool = True,
    ):
        self.dom = dom
        self.cod = cod
        self.states = tuple(states)
        self.dom_anchor = dict(dom_anchor)
        self.cod_anchor = dict(cod_anchor)
        self.transition = dict(transition)
        self.output = dict(output)
        if check:
            self._check()

    def validate(self) -> "MealyMorphism":
        self._check()
        return self

    def inputs(self, x):
        return self.dom.out(self.dom_anchor[x])

    def _check(self):
        A, B = self.dom, self.cod
        if len(set(self.states)) != len(self.states):
            raise AxiomViolation(0, "duplicate states")
        stateset = set(self.states)
        for x in self.states:
            if self.dom_anchor.get(x) not in A._out or self.cod_anchor.get(x) not in B._out:
                raise AxiomViolation(0, f"state {x!r} is not anchored in both categories", x)
        for x in self.states:
            for u in self.inputs(x):
                if (x, u) not in self.transition or (x, u) not in self.output:
                    raise AxiomViolation(0, f"no transition for input {u!r} at {x!r}", (x, u))
                y, w = self.transition[(x, u)], self.output[(x, u)]
                if y not in stateset:
                    raise AxiomViolation(0, f"transition of {u!r} at {x!r} leaves the state set", (x, u))
                if w not in B.morphisms or B.morphisms[w] != (self.cod_anchor[x], self.cod_anchor[y]):
                    raise AxiomViolation(0, f"output of {u!r} at {x!r} has the wrong endpoints", (x, u))
        for x in self.states:
            for u in self.inputs(x):
                if self.dom_anchor[self.transition[(x, u)]] != A.tgt(u):
                    raise AxiomViolation(1, f"transition of {u!r} at {x!r} lands over the wrong object", (x, u))
        for x in self.states:
            i = A.id(self.dom_anchor[x])
            if self.transition[(x, i)] != x or self.output[(x, i)] != B.id(self.cod_anchor[x]):
                raise AxiomViolation(2, f"identity input at {x!r} is not inert", x)
        for x in self.states:
            for u in self.inputs(x):
                y = self.transition[(x, u)]
                for v in A.out(A.tgt(u)):
                    vu = A.comp(v, u)
                    if self.transition[(x, vu)] != self.transition[(y, v)]:
                        raise AxiomViolation(3, f"transition not compatible with {v!r} ∘ {u!r} at {x!r}", (x, u, v))
                    if self.output[(x, vu)] != B.comp(self.output[(y, v)], self.output[(x, u)]):
                        raise AxiomViolation(3, f"output not compatible with {v!r} ∘ {u!r} at {x!r}", (x, u, v))

    def tables(self) -> tuple:
        return (set(self.states), self.dom_anchor, self.cod_anchor, self.transition, self.output)

    def __eq__(self, other):
        if not isinstance(other, MealyMorphism):
            return NotImplemented
        return self.tables() == other.tables() and self.dom == other.dom and self.cod == other.cod

    __hash__ = None

    def __repr__(self):
        return f"MealyMorphism({len(self.states)} states, {self.dom!r} ↛ {self.cod!r})"


def check_mealy(dom, cod, states, dom_anchor, cod_anchor, transition, output) -> MealyMorphism:
    return MealyMorphism(dom, cod, states, dom_anchor, cod_anchor, transition, output)


def functor_as_mealy(F: Functor) -> MealyMorphism:
    A = F.dom
    return MealyMorphism(
        A,
        F.cod,
        A.objects,
        {a: a for a in A.objects},
        dict(F.ob),
        {(A.src(u), u): A.tgt(u) for u in A.morphisms},
        {(A.src(u), u): F.mor[u] for u in A.morphisms},
        check=False,
    )


def cofunctor_as_mealy(c: Cofunctor) -> MealyMorphism:
    """The Mealy morphism ``base ↛ total`` carried by a cofunctor."""
    return MealyMorphism(
        c.base,
        c.total,
        c.total.objects,
        dict(c.obj_map),
        {a: a for a in c.total.objects},
        {k: c.total.tgt(w) for k, w in c.lift.items()},
        dict(c.lift),
        check=False,
    )


def identity_mealy(C: FinCat) -> MealyMorphism:
    return functor_as_mealy(Functor.identity(C))


def compose_mealy(first: MealyMorphism, second: MealyMorphism) -> MealyMorphism:
    """Composite ``A ↛ C`` of ``first: A ↛ B`` and ``second: B ↛ C``.

    States are pairs ``(x, y)`` with matching anchors in ``B``; the output
    of ``first`` is fed to ``second`` as its input.
    """
    if first.cod != second.dom:
        raise PreconditionViolated("Mealy morphisms are not composable")
    A = first.dom
    states = [(x, y) for x in first.states for y in second.states if first.cod_anchor[x] == second.dom_anchor[y]]
    trans, out = {}, {}
    for x, y in states:
        for u in first.inputs(x):
            w = first.output[(x, u)]
            trans[((x, y), u)] = (first.transition[(x, u)], second.transition[(y, w)])
            out[((x, y), u)] = second.output[(y, w)]
    return MealyMorphism(
        A,
        second.cod,
        states,
        {s: first.dom_anchor[s[0]] for s in states},
        {s: second.cod_anchor[s[1]] for s in states},
        trans,
        out,
        check=False,
    )


def rename_states(m: MealyMorphism, rename: Mapping) -> MealyMorphism:
    r = rename.__getitem__
    return MealyMorphism(
        m.dom,
        m.cod,
        [r(x) for x in m.states],
        {r(x): a for x, a in m.dom_anchor.items()},
        {r(x): b for x, b in m.cod_anchor.items()},
        {(r(x), u): r(y) for (x, u), y in m.transition.items()},
        {(r(x), u): w for (x, u), w in m.output.items()},
        check=False,
    )


def mealy_map_witness(source: MealyMorphism, target: MealyMorphism, state_map: Mapping):
    """First failure of ``state_map`` as a map of Mealy morphisms, or None."""
    for x in source.states:
        y = state_map.get(x)
        if y not in target.dom_anchor:
            return ("unmapped", x)
        if source.dom_anchor[x] != target.dom_anchor[y] or source.cod_anchor[x] != target.cod_anchor[y]:
            return ("anchor", x)
    for (x, u), nxt in source.transition.items():
        y = state_map[x]
        if state_map[nxt] != target.transition[(y, u)]:
            return ("transition", x, u)
        if source.output[(x, u)] != target.output[(y, u)]:
            return ("output", x, u)
    return None


def is_mealy_map(source: MealyMorphism, target: MealyMorphism, state_map: Mapping) -> bool:
    return mealy_map_witness(source, target, state_map) is None


# -- span representations --------------------------------------------------------------


@dataclass
class MealySpan:
    """``dom <- apex -> cod`` with the left leg a discrete opfibration."""

    apex: FinCat
    left: Functor
    right: Functor


@dataclass
class CofunctorSpan:
    """``base <- apex -> total``: a discrete opfibration and an identity-on-objects functor."""

    apex: FinCat
    opfibration: Functor
    inclusion: Functor


def mealy_span_rep(m: MealyMorphism) -> MealySpan:
    """The image category of ``m``: objects are states, morphisms ``(x, u): x -> q(x, u)``."""
    A = m.dom
    mors = {(x, u): (x, m.transition[(x, u)]) for x in m.states for u in m.inputs(x)}
    ids = {x: (x, A.id(m.dom_anchor[x])) for x in m.states}
    apex = FinCat.generate(m.states, mors, ids, lambda g, f: (f[0], A.comp(g[1], f[1])), check=False)
    left = Functor(apex, A, dict(m.dom_anchor), {k: k[1] for k in mors}, check=False)
    right = Functor(apex, m.cod, dict(m.cod_anchor), {k: m.output[k] for k in mors}, check=False)
    return MealySpan(apex, left, right)


def span_to_mealy(span: MealySpan) -> MealyMorphism:
    w = dof_witness(span.left)
    if w is not None:
        raise ShapeError("left leg is not a discrete opfibration", w)
    X, g, f = span.apex, span.left, span.right
    trans, out = {}, {}
    for x in X.objects:
        for u in g.cod.out(g.ob[x]):
            lw = unique_lift(g, x, u)
            trans[(x, u)] = X.tgt(lw)
            out[(x, u)] = f.mor[lw]
    return MealyMorphism(g.cod, f.cod, X.objects, dict(g.ob), dict(f.ob), trans, out)


def cofunctor_span_rep(c: Cofunctor) -> CofunctorSpan:
    """Image of a cofunctor: objects of ``total``, morphisms ``(a, u): a -> p(a, u)``."""
    span = mealy_span_rep(cofunctor_as_mealy(c))
    return CofunctorSpan(span.apex, span.left, span.right)


def span_to_cofunctor(span: CofunctorSpan) -> Cofunctor:
    w = dof_witness(span.opfibration)
    if w is not None:
        raise ShapeError("left leg is not a discrete opfibration", w)
    if not span.inclusion.is_identity_on_objects:
        raise ShapeError("right leg is not identity-on-objects")
    X, g, f = span.apex, span.opfibration, span.inclusion
    lift = {(x, u): f.mor[unique_lift(g, x, u)] for x in X.objects for u in g.cod.out(g.ob[x])}
    return Cofunctor(g.cod, f.cod, dict(g.ob), lift)


# -- asymmetric lenses -------------------------------------------------------------------


class Lens:
    """An asymmetric delta lens: a get functor with a compatible put cofunctor."""

    def __init__(self, get: Functor, put: Cofunctor, *, check: bool = True):
        self.get = get
        self.put = put
        if check:
            self._check()

    def validate(self) -> "Lens":
        self.get.validate()
        self.put.validate()
        self._check()
        return self

    @property
    def source(self) -> FinCat:
        return self.get.dom

    @property
    def view(self) -> FinCat:
        return self.get.cod

    def _check(self):
        if self.put.total != self.get.dom or self.put.base != self.get.cod:
            raise ObjectMismatch("get and put are between different categories")
        for a in self.get.dom.objects:
            if self.put.obj_map[a] != self.get.ob[a]:
                raise ObjectMismatch(f"get and put disagree on object {a!r}", a)
        for (a, u), w in self.put.lift.items():
            if self.get.mor[w] != u:
                raise PutGetViolation(f"put of {u!r} at {a!r} is not sent back to {u!r}", (a, u))

    def __eq__(self, other):
        if not isinstance(other, Lens):
            return NotImplemented
        return self.get == other.get and self.put == other.put

    __hash__ = None

    def __repr__(self):
        return f"Lens({self.source!r} ⇌ {self.view!r})"


def check_lens(get: Functor, put_obj_map: Mapping, put_lift: Mapping) -> Lens:
    """Validate functor, cofunctor and the compatibility laws, in that order."""
    put = Cofunctor(get.cod, get.dom, put_obj_map, put_lift)
    return Lens(get, put)


def identity_lens(C: FinCat) -> Lens:
    return Lens(Functor.identity(C), identity_cofunctor(C), check=False)


def compose_lens(first: Lens, second: Lens) -> Lens:
    """``first: A ⇌ B`` followed by ``second: B ⇌ C``."""
    if first.view != second.source:
        raise PreconditionViolated("lenses are not composable")
    return Lens(first.get.then(second.get), compose_cofunctors(second.put, first.put), check=False)


@dataclass
class LensDiagram:
    """``source <- apex -> view`` with ``get ∘ inclusion = opfibration``."""

    apex: FinCat
    inclusion: Functor
    opfibration: Functor
    get: Functor


def lens_diagram_rep(lens: Lens) -> LensDiagram:
    span = cofunctor_span_rep(lens.put)
    return LensDiagram(span.apex, span.inclusion, span.opfibration, lens.get)


def diagram_to_lens(d: LensDiagram) -> Lens:
    if not d.inclusion.then(d.get).same_maps(d.opfibration):
        raise ShapeError("lens diagram does not commute")
    put = span_to_cofunctor(CofunctorSpan(d.apex, d.opfibration, d.inclusion))
    return Lens(d.get, put)


def composite_apex_pullback(first: Lens, second: Lens):
    """Pullback of the first lens's opfibration leg along the second's inclusion leg."""
    d1, d2 = lens_diagram_rep(first), lens_diagram_rep(second)
    return pullback(d1.opfibration, d2.inclusion)


def lens_to_terminal(C: FinCat, T: FinCat) -> Lens:
    """The unique lens from ``C`` into a one-object, one-morphism category ``T``."""
    (star,) = T.objects
    get = Functor(C, T, {a: star for a in C.objects}, {u: T.id(star) for u in C.morphisms}, check=False)
    put = Cofunctor(T, C, {a: star for a in C.objects}, {(a, T.id(star)): C.id(a) for a in C.objects}, check=False)
    return Lens(get, put, check=False)

