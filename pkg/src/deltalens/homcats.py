"""Hom-categories of lenses over a base, spans of lenses and symmetric lenses."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .category import FinCat, Functor, enumerate_functors, inverse, is_isomorphism, pullback
from .errors import AnchorMismatch, PreconditionViolated
from .lenses import (
    Cofunctor,
    Lens,
    MealyMorphism,
    cofunctor_as_mealy,
    compose_lens,
    compose_mealy,
    functor_as_mealy,
    identity_lens,
    lens_diagram_rep,
    mealy_map_witness,
    mealy_span_rep,
    rename_states,
)

# -- lenses over a base ------------------------------------------------------------


@dataclass
class HomVerdict:
    ok: bool
    witness: tuple | None = None
    induced: Functor | None = None

    def __bool__(self):
        return self.ok


def induced_put_functor(h: Functor, src: Lens, tgt: Lens) -> Functor:
    """The map of put-apexes ``(a, u) -> (h a, u)`` determined by ``h``."""
    d1, d2 = lens_diagram_rep(src), lens_diagram_rep(tgt)
    return Functor(
        d1.apex,
        d2.apex,
        {a: h.ob[a] for a in d1.apex.objects},
        {(a, u): (h.ob[a], u) for (a, u) in d1.apex.morphisms},
        check=False,
    )


def lensB_hom_check(h: Functor, src: Lens, tgt: Lens) -> HomVerdict:
    """Is ``h`` a morphism ``src -> tgt`` of lenses over their common view?"""
    if h.dom != src.source or h.cod != tgt.source or src.view != tgt.view:
        raise PreconditionViolated("functor does not run between the lens sources over one base")
    for a in src.source.objects:
        if tgt.get.ob[h.ob[a]] != src.get.ob[a]:
            return HomVerdict(False, ("get", a))
    for w in src.source.morphisms:
        if tgt.get.mor[h.mor[w]] != src.get.mor[w]:
            return HomVerdict(False, ("get", w))
    for (a, u), w in src.put.lift.items():
        if h.mor[w] != tgt.put.lift[(h.ob[a], u)]:
            return HomVerdict(False, ("put", a, u))
    return HomVerdict(True, None, induced_put_functor(h, src, tgt))


def lensB_product(first: Lens, second: Lens) -> tuple[Lens, Functor, Functor]:
    """Product of two lenses over the same base, with its two projections."""
    if first.view != second.view:
        raise PreconditionViolated("lenses must share their view category")
    P, p0, p1 = pullback(first.get, second.get)
    get = p0.then(first.get)
    lift = {}
    for a, c in P.objects:
        for u in first.view.out(first.get.ob[a]):
            lift[((a, c), u)] = (first.put.lift[(a, u)], second.put.lift[(c, u)])
    put = Cofunctor(first.view, P, dict(get.ob), lift, check=False)
    return Lens(get, put, check=False), p0, p1


def fake_pullback(left: Lens, right: Lens) -> "LensSpan":
    """Canonical cone over the cospan ``left: A ⇌ B``, ``right: C ⇌ B``."""
    if left.view != right.view:
        raise PreconditionViolated("lenses must share their view category")
    P, p0, p1 = pullback(left.get, right.get)
    lift0, lift1 = {}, {}
    for a, c in P.objects:
        for u in left.source.out(a):
            lift0[((a, c), u)] = (u, right.put.lift[(c, left.get.mor[u])])
        for w in right.source.out(c):
            lift1[((a, c), w)] = (left.put.lift[(a, right.get.mor[w])], w)
    l0 = Lens(p0, Cofunctor(left.source, P, dict(p0.ob), lift0, check=False), check=False)
    l1 = Lens(p1, Cofunctor(right.source, P, dict(p1.ob), lift1, check=False), check=False)
    return LensSpan(P, l0, l1)


# -- spans of lenses --------------------------------------------------------------------


@dataclass
class LensSpan:
    """Two lenses ``apex ⇌ left.view`` and ``apex ⇌ right.view``."""

    apex: FinCat
    left: Lens
    right: Lens

    def __post_init__(self):
        if self.left.source != self.apex or self.right.source != self.apex:
            raise PreconditionViolated("span legs must start at the apex")

    def validate(self) -> "LensSpan":
        self.apex.validate()
        self.left.validate()
        self.right.validate()
        return self

    @property
    def A(self) -> FinCat:
        return self.left.view

    @property
    def B(self) -> FinCat:
        return self.right.view

    def __eq__(self, other):
        if not isinstance(other, LensSpan):
            return NotImplemented
        return self.left == other.left and self.right == other.right


@dataclass
class SpanLensMorphism:
    """A 2-cell between spans, given by a functor of apexes."""

    source: LensSpan
    target: LensSpan
    h: Functor
    left_verdict: HomVerdict
    right_verdict: HomVerdict

    @property
    def ok(self) -> bool:
        return self.left_verdict.ok and self.right_verdict.ok

    @property
    def witness(self):
        if not self.left_verdict.ok:
            return ("left",) + tuple(self.left_verdict.witness)
        if not self.right_verdict.ok:
            return ("right",) + tuple(self.right_verdict.witness)
        return None

    @property
    def induced_left(self) -> Functor | None:
        return self.left_verdict.induced

    @property
    def induced_right(self) -> Functor | None:
        return self.right_verdict.induced

    def __bool__(self):
        return self.ok


def spnlens_2cell(h: Functor, source: LensSpan, target: LensSpan) -> SpanLensMorphism:
    if source.A != target.A or source.B != target.B:
        raise PreconditionViolated("spans have different boundaries")
    return SpanLensMorphism(
        source,
        target,
        h,
        lensB_hom_check(h, source.left, target.left),
        lensB_hom_check(h, source.right, target.right),
    )


def identity_2cell(s: LensSpan) -> SpanLensMorphism:
    return spnlens_2cell(Functor.identity(s.apex), s, s)


def compose_2cells(first: SpanLensMorphism, second: SpanLensMorphism) -> SpanLensMorphism:
    """Vertical composite: ``first`` then ``second``."""
    return spnlens_2cell(first.h.then(second.h), first.source, second.target)


def is_invertible_2cell(cell: SpanLensMorphism) -> bool:
    if not cell.ok or not is_isomorphism(cell.h):
        return False
    return spnlens_2cell(inverse(cell.h), cell.target, cell.source).ok


def identity_span(A: FinCat) -> LensSpan:
    lens = identity_lens(A)
    return LensSpan(A, lens, lens)


def spnlens_hcompose(first: LensSpan, second: LensSpan) -> LensSpan:
    """Horizontal composite ``A … B … C`` by fake pullback over ``B``."""
    if first.B != second.A:
        raise PreconditionViolated("spans are not composable")
    cone = fake_pullback(first.right, second.left)
    return LensSpan(cone.apex, compose_lens(cone.left, first.left), compose_lens(cone.right, second.right))


def embed_lens_spn(lens: Lens) -> LensSpan:
    return LensSpan(lens.source, identity_lens(lens.source), lens)


def _remap(C: FinCat, D: FinCat, obj, mor) -> Functor:
    return Functor(C, D, {a: obj(a) for a in C.objects}, {u: mor(u) for u in C.morphisms})


def _reassoc(t):
    (x, y), z = t
    return (x, (y, z))


def spnlens_associator(s1: LensSpan, s2: LensSpan, s3: LensSpan) -> SpanLensMorphism:
    """Canonical 2-cell ``(s1 s2) s3 -> s1 (s2 s3)``."""
    lhs = spnlens_hcompose(spnlens_hcompose(s1, s2), s3)
    rhs = spnlens_hcompose(s1, spnlens_hcompose(s2, s3))
    return spnlens_2cell(_remap(lhs.apex, rhs.apex, _reassoc, _reassoc), lhs, rhs)


def spnlens_left_unitor(s: LensSpan) -> SpanLensMorphism:
    """``id_A s -> s``."""
    comp = spnlens_hcompose(identity_span(s.A), s)
    return spnlens_2cell(_remap(comp.apex, s.apex, lambda o: o[1], lambda w: w[1]), comp, s)


def spnlens_right_unitor(s: LensSpan) -> SpanLensMorphism:
    """``s id_B -> s``."""
    comp = spnlens_hcompose(s, identity_span(s.B))
    return spnlens_2cell(_remap(comp.apex, s.apex, lambda o: o[0], lambda w: w[0]), comp, s)


def enumerate_span_2cells(source: LensSpan, target: LensSpan) -> Iterator[SpanLensMorphism]:
    """Every valid 2-cell ``source -> target``, by exhaustive functor search."""
    sl, sr, tl, tr = source.left.get, source.right.get, target.left.get, target.right.get
    cands = {
        x: [y for y in target.apex.objects if tl.ob[y] == sl.ob[x] and tr.ob[y] == sr.ob[x]]
        for x in source.apex.objects
    }

    def allowed(u, v):
        return tl.mor[v] == sl.mor[u] and tr.mor[v] == sr.mor[u]

    for h in enumerate_functors(source.apex, target.apex, objects=cands, allowed=allowed):
        cell = spnlens_2cell(h, source, target)
        if cell.ok:
            yield cell


def find_span_isomorphism(source: LensSpan, target: LensSpan) -> SpanLensMorphism | None:
    if len(source.apex.morphisms) != len(target.apex.morphisms):
        return None
    for cell in enumerate_span_2cells(source, target):
        if is_invertible_2cell(cell):
            return cell
    return None


# -- symmetric lenses ---------------------------------------------------------------


class SymmetricLens:
    """A pair of Mealy morphisms ``A ↛ B`` and ``B ↛ A`` on one anchored state set."""

    def __init__(self, forward: MealyMorphism, backward: MealyMorphism, *, check: bool = True):
        self.forward = forward
        self.backward = backward
        if check:
            self._check()

    def _check(self):
        f, b = self.forward, self.backward
        f._check()
        b._check()
        if f.dom != b.cod or f.cod != b.dom:
            raise AnchorMismatch("forward and backward run between different categories")
        if set(f.states) != set(b.states):
            raise AnchorMismatch("forward and backward have different state sets")
        for x in f.states:
            if f.dom_anchor[x] != b.cod_anchor[x]:
                raise AnchorMismatch(f"state {x!r} has two different anchors in the left category", x)
            if f.cod_anchor[x] != b.dom_anchor[x]:
                raise AnchorMismatch(f"state {x!r} has two different anchors in the right category", x)

    def validate(self) -> "SymmetricLens":
        self._check()
        return self

    @property
    def states(self) -> tuple:
        return self.forward.states

    @property
    def A(self) -> FinCat:
        return self.forward.dom

    @property
    def B(self) -> FinCat:
        return self.forward.cod

    @property
    def left_anchor(self) -> dict:
        return self.forward.dom_anchor

    @property
    def right_anchor(self) -> dict:
        return self.forward.cod_anchor

    def __eq__(self, other):
        if not isinstance(other, SymmetricLens):
            return NotImplemented
        return self.forward == other.forward and self.backward == other.backward

    __hash__ = None

    def __repr__(self):
        return f"SymmetricLens({len(self.states)} states, {self.A!r} … {self.B!r})"


def symlens_validate(forward: MealyMorphism, backward: MealyMorphism) -> SymmetricLens:
    return SymmetricLens(forward, backward)


def dagger(s: SymmetricLens) -> SymmetricLens:
    return SymmetricLens(s.backward, s.forward, check=False)


def embed_lens_sym(lens: Lens) -> SymmetricLens:
    return SymmetricLens(functor_as_mealy(lens.get), cofunctor_as_mealy(lens.put), check=False)


def identity_symlens(A: FinCat) -> SymmetricLens:
    return embed_lens_sym(identity_lens(A))


def symlens_hcompose(first: SymmetricLens, second: SymmetricLens) -> SymmetricLens:
    if first.B != second.A:
        raise PreconditionViolated("symmetric lenses are not composable")
    forward = compose_mealy(first.forward, second.forward)
    backward = compose_mealy(second.backward, first.backward)
    backward = rename_states(backward, {(y, x): (x, y) for (y, x) in backward.states})
    return SymmetricLens(forward, backward, check=False)


@dataclass
class SymLensMorphism:
    source: SymmetricLens
    target: SymmetricLens
    state_map: dict
    witness: tuple | None

    @property
    def ok(self) -> bool:
        return self.witness is None

    def __bool__(self):
        return self.ok


def symlens_2cell(state_map: Mapping, source: SymmetricLens, target: SymmetricLens) -> SymLensMorphism:
    if source.A != target.A or source.B != target.B:
        raise PreconditionViolated("symmetric lenses have different boundaries")
    state_map = dict(state_map)
    w = mealy_map_witness(source.forward, target.forward, state_map)
    if w is not None:
        return SymLensMorphism(source, target, state_map, ("forward",) + w)
    w = mealy_map_witness(source.backward, target.backward, state_map)
    if w is not None:
        return SymLensMorphism(source, target, state_map, ("backward",) + w)
    return SymLensMorphism(source, target, state_map, None)


def identity_sym_2cell(s: SymmetricLens) -> SymLensMorphism:
    return symlens_2cell({x: x for x in s.states}, s, s)


def compose_sym_2cells(first: SymLensMorphism, second: SymLensMorphism) -> SymLensMorphism:
    return symlens_2cell({x: second.state_map[y] for x, y in first.state_map.items()}, first.source, second.target)


def is_invertible_sym_2cell(cell: SymLensMorphism) -> bool:
    m = cell.state_map
    if not cell.ok or len(set(m.values())) != len(m) or len(m) != len(cell.target.states):
        return False
    return symlens_2cell({y: x for x, y in m.items()}, cell.target, cell.source).ok


def symlens_associator(s1: SymmetricLens, s2: SymmetricLens, s3: SymmetricLens) -> SymLensMorphism:
    lhs = symlens_hcompose(symlens_hcompose(s1, s2), s3)
    rhs = symlens_hcompose(s1, symlens_hcompose(s2, s3))
    return symlens_2cell({x: _reassoc(x) for x in lhs.states}, lhs, rhs)


def symlens_left_unitor(s: SymmetricLens) -> SymLensMorphism:
    comp = symlens_hcompose(identity_symlens(s.A), s)
    return symlens_2cell({x: x[1] for x in comp.states}, comp, s)


def symlens_right_unitor(s: SymmetricLens) -> SymLensMorphism:
    comp = symlens_hcompose(s, identity_symlens(s.B))
    return symlens_2cell({x: x[0] for x in comp.states}, comp, s)


def enumerate_sym_2cells(source: SymmetricLens, target: SymmetricLens) -> Iterator[SymLensMorphism]:
    xs = list(source.states)
    cands = [
        [
            y
            for y in target.states
            if target.left_anchor[y] == source.left_anchor[x] and target.right_anchor[y] == source.right_anchor[x]
        ]
        for x in xs
    ]
    for choice in itertools.product(*cands):
        cell = symlens_2cell(dict(zip(xs, choice)), source, target)
        if cell.ok:
            yield cell


def find_sym_isomorphism(source: SymmetricLens, target: SymmetricLens) -> SymLensMorphism | None:
    if len(source.states) != len(target.states):
        return None
    for cell in enumerate_sym_2cells(source, target):
        if is_invertible_sym_2cell(cell):
            return cell
    return None


def symlens_spans(s: SymmetricLens):
    """Span representations of the forward and backward Mealy morphisms."""
    return mealy_span_rep(s.forward), mealy_span_rep(s.backward)
