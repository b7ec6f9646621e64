"""Finite categories, functors, and the bo-ff factorisation system.

Object and morphism identifiers are arbitrary hashable values.  Hand-written
categories use strings; constructions (images, pullbacks, products) build
tuple identifiers out of the identifiers they were given, so every derived
table stays decidable by lookup.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

from .errors import (
    EndpointMismatch,
    LawViolation,
    MissingComposite,
    NotAFunctor,
    PreconditionViolated,
)

Ident = Hashable


def sort_key(x: Any) -> str:
    """Total order on identifiers of mixed type (strings and nested tuples)."""
    if isinstance(x, tuple):
        return "(" + ",".join(sort_key(y) for y in x) + ")"
    return repr(x) if not isinstance(x, str) else x


def sorted_idents(xs: Iterable[Any]) -> list:
    return sorted(xs, key=sort_key)


class FinCat:
    """A finite category given by explicit tables.

    ``morphisms`` maps each morphism to its ``(source, target)`` pair,
    ``identities`` maps objects to their identity morphism and
    ``composition`` maps ``(g, f)`` to ``g ∘ f`` for every composable pair.
    With ``check=True`` (the default) every category law is verified
    exhaustively and a :class:`CategoryError` subclass is raised on failure.
    """

    def __init__(
        self,
        objects: Iterable[Ident],
        morphisms: Mapping[Ident, tuple],
        identities: Mapping[Ident, Ident],
        composition: Mapping[tuple, Ident],
        *,
        check: bool = True,
    ):
        self.objects = tuple(objects)
        self.morphisms = {u: tuple(st) for u, st in morphisms.items()}
        self.identities = dict(identities)
        self.composition = dict(composition)
        self._identity_set = set(self.identities.values())
        self._out: dict = {a: [] for a in self.objects}
        self._hom: dict = {}
        if check:
            self._check_shape()
        for u, (s, t) in self.morphisms.items():
            self._out.setdefault(s, []).append(u)
            self._hom.setdefault((s, t), []).append(u)
        if check:
            self._check_laws()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def generate(
        cls,
        objects: Iterable[Ident],
        morphisms: Mapping[Ident, tuple],
        identities: Mapping[Ident, Ident],
        compose: Callable[[Ident, Ident], Ident],
        *,
        check: bool = True,
    ) -> "FinCat":
        """Build the composition table by calling ``compose(g, f)`` on every composable pair."""
        by_src: dict = {}
        for u, (s, _) in morphisms.items():
            by_src.setdefault(s, []).append(u)
        table = {}
        for f, (_, t) in morphisms.items():
            for g in by_src.get(t, ()):
                table[(g, f)] = compose(g, f)
        return cls(objects, morphisms, identities, table, check=check)

    # -- validation -----------------------------------------------------------

    def _check_shape(self):
        if len(set(self.objects)) != len(self.objects):
            raise EndpointMismatch("duplicate object identifiers")
        objs = set(self.objects)
        for u, st in self.morphisms.items():
            if len(st) != 2 or st[0] not in objs or st[1] not in objs:
                raise EndpointMismatch(f"morphism {u!r} has unknown endpoints {st!r}", u)
        for a in self.objects:
            if a not in self.identities:
                raise EndpointMismatch(f"object {a!r} has no identity", a)
        for a, i in self.identities.items():
            if a not in objs:
                raise EndpointMismatch(f"identity declared for unknown object {a!r}", a)
            if self.morphisms.get(i) != (a, a):
                raise EndpointMismatch(f"identity {i!r} of {a!r} is not an endomorphism of {a!r}", (a, i))
        for (g, f), gf in self.composition.items():
            for m in (g, f, gf):
                if m not in self.morphisms:
                    raise EndpointMismatch(f"composition entry mentions unknown morphism {m!r}", (g, f))
            if self.morphisms[f][1] != self.morphisms[g][0]:
                raise EndpointMismatch(f"composite {g!r} ∘ {f!r} declared for non-composable pair", (g, f))
            if self.morphisms[gf] != (self.morphisms[f][0], self.morphisms[g][1]):
                raise EndpointMismatch(f"composite {g!r} ∘ {f!r} = {gf!r} has wrong endpoints", (g, f, gf))

    def _check_laws(self):
        for f, (s, t) in self.morphisms.items():
            for g in self._out[t]:
                if (g, f) not in self.composition:
                    raise MissingComposite(f"no composite for {g!r} ∘ {f!r}", (g, f))
        for f, (s, t) in self.morphisms.items():
            if self.composition[(self.identities[t], f)] != f:
                raise LawViolation(f"left unit law fails at {f!r}", ("left-unit", f))
            if self.composition[(f, self.identities[s])] != f:
                raise LawViolation(f"right unit law fails at {f!r}", ("right-unit", f))
        comp = self.composition
        for f, (_, t) in self.morphisms.items():
            for g in self._out[t]:
                gf = comp[(g, f)]
                for h in self._out[self.morphisms[g][1]]:
                    if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                        raise LawViolation(
                            f"associativity fails at ({h!r}, {g!r}, {f!r})", ("assoc", h, g, f)
                        )

    def validate(self) -> "FinCat":
        """Re-run every exhaustive check; returns ``self``."""
        self._check_shape()
        self._check_laws()
        return self

    # -- queries --------------------------------------------------------------

    def src(self, u: Ident) -> Ident:
        return self.morphisms[u][0]

    def tgt(self, u: Ident) -> Ident:
        return self.morphisms[u][1]

    def id(self, a: Ident) -> Ident:
        return self.identities[a]

    def comp(self, g: Ident, f: Ident) -> Ident:
        """``g ∘ f`` (apply ``f`` first)."""
        return self.composition[(g, f)]

    def is_identity(self, u: Ident) -> bool:
        return u in self._identity_set

    def out(self, a: Ident) -> list:
        """Morphisms with source ``a``."""
        return self._out.get(a, [])

    def hom(self, a: Ident, b: Ident) -> list:
        return self._hom.get((a, b), [])

    def non_identities(self) -> list:
        return [u for u in self.morphisms if u not in self._identity_set]

    @property
    def is_discrete(self) -> bool:
        return len(self.morphisms) == len(self.objects)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and self.morphisms == other.morphisms
            and self.identities == other.identities
            and self.composition == other.composition
        )

    __hash__ = None

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def from_arrows(objects: Iterable[Ident], arrows: Mapping[Ident, tuple], composites: Mapping[tuple, Ident] = (), identity=lambda a: f"id{a}") -> FinCat:
    """Validated category from its non-identity arrows and their composites.

    Identities are added automatically and named by ``identity``.
    """
    objects = list(objects)
    ids = {a: identity(a) for a in objects}
    mors = {ids[a]: (a, a) for a in objects}
    mors.update(arrows)
    table = dict(composites)
    for u, (s, t) in mors.items():
        table[(ids[t], u)] = u
        table[(u, ids[s])] = u
    return FinCat(objects, mors, ids, table)


def discrete(objects: Iterable[Ident], identity=lambda x: ("id", x)) -> FinCat:
    objects = list(objects)
    ids = {a: identity(a) for a in objects}
    mors = {ids[a]: (a, a) for a in objects}
    return FinCat(objects, mors, ids, {(i, i): i for i in ids.values()}, check=False)


def terminal() -> FinCat:
    return FinCat(["*"], {"id*": ("*", "*")}, {"*": "id*"}, {("id*", "id*"): "id*"})


class Functor:
    """A functor between finite categories, stored as two lookup tables."""

    def __init__(
        self,
        dom: FinCat,
        cod: FinCat,
        on_objects: Mapping[Ident, Ident],
        on_morphisms: Mapping[Ident, Ident],
        *,
        check: bool = True,
    ):
        self.dom = dom
        self.cod = cod
        self.ob = dict(on_objects)
        self.mor = dict(on_morphisms)
        if check:
            self._check()

    def _check(self):
        dom, cod = self.dom, self.cod
        for a in dom.objects:
            if a not in self.ob:
                raise NotAFunctor("totality", f"object {a!r} is not mapped", a)
            if self.ob[a] not in cod._out:
                raise NotAFunctor("totality", f"object {a!r} mapped outside the codomain", a)
        for u in dom.morphisms:
            if u not in self.mor:
                raise NotAFunctor("totality", f"morphism {u!r} is not mapped", u)
            if self.mor[u] not in cod.morphisms:
                raise NotAFunctor("totality", f"morphism {u!r} mapped outside the codomain", u)
        for u, (s, t) in dom.morphisms.items():
            v = self.mor[u]
            if cod.src(v) != self.ob[s]:
                raise NotAFunctor("source", f"source of {u!r} not preserved", u)
            if cod.tgt(v) != self.ob[t]:
                raise NotAFunctor("target", f"target of {u!r} not preserved", u)
        for a in dom.objects:
            if self.mor[dom.id(a)] != cod.id(self.ob[a]):
                raise NotAFunctor("identity", f"identity of {a!r} not preserved", a)
        for (g, f), gf in dom.composition.items():
            if self.mor[gf] != cod.comp(self.mor[g], self.mor[f]):
                raise NotAFunctor("composition", f"composite {g!r} ∘ {f!r} not preserved", (g, f))

    def validate(self) -> "Functor":
        self._check()
        return self

    @classmethod
    def identity(cls, C: FinCat) -> "Functor":
        return cls(C, C, {a: a for a in C.objects}, {u: u for u in C.morphisms}, check=False)

    def __call__(self, u: Ident) -> Ident:
        return self.mor[u]

    def then(self, other: "Functor") -> "Functor":
        """``other ∘ self``."""
        if other.dom is not self.cod and other.dom != self.cod:
            raise PreconditionViolated("functors are not composable")
        return Functor(
            self.dom,
            other.cod,
            {a: other.ob[b] for a, b in self.ob.items()},
            {u: other.mor[v] for u, v in self.mor.items()},
            check=False,
        )

    def same_maps(self, other: "Functor") -> bool:
        return self.ob == other.ob and self.mor == other.mor

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return self.same_maps(other) and self.dom == other.dom and self.cod == other.cod

    __hash__ = None

    @property
    def is_identity_on_objects(self) -> bool:
        return set(self.dom.objects) == set(self.cod.objects) and all(
            a == b for a, b in self.ob.items()
        )

    def __repr__(self):
        return f"Functor({self.dom!r} -> {self.cod!r})"


def validate_functor(dom: FinCat, cod: FinCat, on_objects, on_morphisms) -> Functor:
    return Functor(dom, cod, on_objects, on_morphisms)


def is_isomorphism(F: Functor) -> bool:
    return (
        len(set(F.ob.values())) == len(F.dom.objects) == len(F.cod.objects)
        and len(set(F.mor.values())) == len(F.dom.morphisms) == len(F.cod.morphisms)
    )


def inverse(F: Functor) -> Functor:
    if not is_isomorphism(F):
        raise PreconditionViolated("functor is not invertible")
    return Functor(
        F.cod, F.dom, {b: a for a, b in F.ob.items()}, {v: u for u, v in F.mor.items()}, check=False
    )


# -- functor classes -------------------------------------------------------------


@dataclass(frozen=True)
class FunctorClass:
    is_discrete_opfibration: bool
    is_bijective_on_objects: bool
    is_fully_faithful: bool
    dof_witness: tuple | None = None
    bo_witness: tuple | None = None
    ff_witness: tuple | None = None

    @property
    def failure_witness(self) -> dict:
        return {
            name: w
            for name, w in (
                ("discrete_opfibration", self.dof_witness),
                ("bijective_on_objects", self.bo_witness),
                ("fully_faithful", self.ff_witness),
            )
            if w is not None
        }


def dof_witness(F: Functor):
    """First ``(a, u)`` where ``u`` has zero or several lifts at ``a``, or None."""
    dom, cod = F.dom, F.cod
    for a in dom.objects:
        lifts: dict = {}
        for w in dom.out(a):
            lifts.setdefault(F.mor[w], []).append(w)
        for u in cod.out(F.ob[a]):
            n = len(lifts.get(u, ()))
            if n != 1:
                return (a, u)
    return None


def ff_witness(F: Functor):
    """First ``(a, a2, u)`` where ``u`` has zero or several preimages, or None."""
    dom, cod = F.dom, F.cod
    for a in dom.objects:
        for a2 in dom.objects:
            pre: dict = {}
            for w in dom.hom(a, a2):
                pre.setdefault(F.mor[w], []).append(w)
            for u in cod.hom(F.ob[a], F.ob[a2]):
                n = len(pre.get(u, ()))
                if n != 1:
                    return (a, a2, u)
    return None


def bo_witness(F: Functor):
    seen: dict = {}
    for a in F.dom.objects:
        b = F.ob[a]
        if b in seen:
            return ("collision", seen[b], a)
        seen[b] = a
    for b in F.cod.objects:
        if b not in seen:
            return ("missed", b)
    return None


def classify_functor(F: Functor) -> FunctorClass:
    d, b, f = dof_witness(F), bo_witness(F), ff_witness(F)
    return FunctorClass(d is None, b is None, f is None, d, b, f)


def is_discrete_opfibration(F: Functor) -> bool:
    return dof_witness(F) is None


def is_fully_faithful(F: Functor) -> bool:
    return ff_witness(F) is None


def unique_lift(F: Functor, a: Ident, u: Ident) -> Ident:
    """The unique morphism out of ``a`` sent to ``u`` by a discrete opfibration."""
    found = [w for w in F.dom.out(a) if F.mor[w] == u]
    if len(found) != 1:
        raise PreconditionViolated(f"{len(found)} lifts of {u!r} at {a!r}", (a, u))
    return found[0]


# -- bo-ff factorisation -----------------------------------------------------------


def boff_factorize(F: Functor) -> tuple[Functor, FinCat, Functor]:
    """Factor ``F`` as an identity-on-objects ``e`` followed by a fully faithful ``m``.

    The image has the objects of ``dom(F)``; its morphisms are triples
    ``(a, u, a2)`` with ``u: Fa -> Fa2``.
    """
    A, B = F.dom, F.cod
    mors = {}
    for a in A.objects:
        for a2 in A.objects:
            for u in B.hom(F.ob[a], F.ob[a2]):
                mors[(a, u, a2)] = (a, a2)
    ids = {a: (a, B.id(F.ob[a]), a) for a in A.objects}
    image = FinCat.generate(
        A.objects, mors, ids, lambda g, f: (f[0], B.comp(g[1], f[1]), g[2]), check=False
    )
    e = Functor(
        A,
        image,
        {a: a for a in A.objects},
        {w: (s, F.mor[w], t) for w, (s, t) in A.morphisms.items()},
        check=False,
    )
    m = Functor(image, B, dict(F.ob), {t: t[1] for t in mors}, check=False)
    return e, image, m


def boff_fill(e: Functor, m: Functor, f: Functor, g: Functor) -> Functor:
    """Diagonal filler of the square ``m ∘ f = g ∘ e`` (``e`` bo, ``m`` ff).

    Returns the unique ``h`` with ``h ∘ e = f`` and ``m ∘ h = g``.
    """
    if not (e.dom == f.dom and e.cod == g.dom and f.cod == m.dom and g.cod == m.cod):
        raise PreconditionViolated("square has mismatched corners")
    if not f.then(m).same_maps(e.then(g)):
        raise PreconditionViolated("square does not commute")
    w = bo_witness(e)
    if w is not None:
        raise PreconditionViolated("left map is not bijective on objects", w)
    w = ff_witness(m)
    if w is not None:
        raise PreconditionViolated("right map is not fully faithful", w)
    C, B = g.dom, m.dom
    back = {c: a for a, c in e.ob.items()}
    on_obj = {c: f.ob[back[c]] for c in C.objects}
    on_mor = {}
    for w_, (s, t) in C.morphisms.items():
        (hw,) = [v for v in B.hom(on_obj[s], on_obj[t]) if m.mor[v] == g.mor[w_]]
        on_mor[w_] = hw
    return Functor(C, B, on_obj, on_mor, check=False)


# -- limits and products -----------------------------------------------------------


def pullback(F: Functor, G: Functor) -> tuple[FinCat, Functor, Functor]:
    """Strict pullback of ``F: A -> C`` and ``G: B -> C``, with projections."""
    if F.cod != G.cod:
        raise PreconditionViolated("pullback legs have different codomains")
    A, B = F.dom, G.dom
    objs = [(a, b) for a in A.objects for b in B.objects if F.ob[a] == G.ob[b]]
    objset = set(objs)
    mors = {}
    for u, (s, t) in A.morphisms.items():
        fu = F.mor[u]
        for v, (s2, t2) in B.morphisms.items():
            if (s, s2) in objset and (t, t2) in objset and G.mor[v] == fu:
                mors[(u, v)] = ((s, s2), (t, t2))
    ids = {(a, b): (A.id(a), B.id(b)) for a, b in objs}
    P = FinCat.generate(
        objs, mors, ids, lambda g, f: (A.comp(g[0], f[0]), B.comp(g[1], f[1])), check=False
    )
    p0 = Functor(P, A, {o: o[0] for o in objs}, {w: w[0] for w in mors}, check=False)
    p1 = Functor(P, B, {o: o[1] for o in objs}, {w: w[1] for w in mors}, check=False)
    return P, p0, p1


def to_terminal(C: FinCat, T: FinCat | None = None) -> Functor:
    T = T or terminal()
    (star,) = T.objects
    return Functor(C, T, {a: star for a in C.objects}, {u: T.id(star) for u in C.morphisms}, check=False)


def product(A: FinCat, B: FinCat) -> tuple[FinCat, Functor, Functor]:
    T = terminal()
    return pullback(to_terminal(A, T), to_terminal(B, T))


def pairing(F: Functor, G: Functor, P: FinCat) -> Functor:
    """``⟨F, G⟩`` into a product or pullback ``P`` built by :func:`pullback`."""
    return Functor(
        F.dom,
        P,
        {a: (F.ob[a], G.ob[a]) for a in F.dom.objects},
        {u: (F.mor[u], G.mor[u]) for u in F.dom.morphisms},
    )


def subcategory_generated(C: FinCat, morphisms: Iterable[Ident]) -> FinCat:
    """Smallest wide subcategory of ``C`` containing ``morphisms``."""
    keep = set(C.identities.values()) | set(morphisms)
    frontier = list(keep)
    while frontier:
        nxt = []
        for f in frontier:
            for g in list(keep):
                for gf in (
                    (C.comp(g, f),) if C.src(g) == C.tgt(f) else ()
                ) + ((C.comp(f, g),) if C.src(f) == C.tgt(g) else ()):
                    if gf not in keep:
                        keep.add(gf)
                        nxt.append(gf)
        frontier = nxt
    mors = {u: C.morphisms[u] for u in C.morphisms if u in keep}
    comp = {k: v for k, v in C.composition.items() if k[0] in keep and k[1] in keep}
    return FinCat(C.objects, mors, C.identities, comp, check=False)


def inclusion(S: FinCat, C: FinCat) -> Functor:
    return Functor(S, C, {a: a for a in S.objects}, {u: u for u in S.morphisms}, check=False)


def relabel(C: FinCat, obj: Callable[[Ident], Ident], mor: Callable[[Ident], Ident]) -> tuple[FinCat, Functor]:
    """Copy of ``C`` with renamed identifiers, and the isomorphism ``C -> copy``."""
    D = FinCat(
        [obj(a) for a in C.objects],
        {mor(u): (obj(s), obj(t)) for u, (s, t) in C.morphisms.items()},
        {obj(a): mor(i) for a, i in C.identities.items()},
        {(mor(g), mor(f)): mor(gf) for (g, f), gf in C.composition.items()},
        check=False,
    )
    iso = Functor(C, D, {a: obj(a) for a in C.objects}, {u: mor(u) for u in C.morphisms}, check=False)
    return D, iso


# -- brute-force enumeration -------------------------------------------------------


def enumerate_functors(
    C: FinCat,
    D: FinCat,
    *,
    objects: Mapping[Ident, Iterable[Ident]] | None = None,
    allowed: Callable[[Ident, Ident], bool] | None = None,
    injective: bool = False,
    rng=None,
) -> Iterator[Functor]:
    """Yield every functor ``C -> D`` by backtracking search.

    ``objects`` restricts the candidate images of individual objects,
    ``allowed(u, v)`` filters candidate images of non-identity morphisms and
    ``injective`` keeps only maps injective on objects and morphisms.  With a
    ``random.Random`` as ``rng`` candidates are tried in shuffled order.
    """
    obs = list(C.objects)
    mors = C.non_identities()
    # each morphism is placed right after the later of its two endpoints
    pos = {a: i for i, a in enumerate(obs)}
    plan: list = []
    by_obj: dict = {a: [] for a in obs}
    for u in mors:
        s, t = C.morphisms[u]
        by_obj[obs[max(pos[s], pos[t])]].append(u)
    for a in obs:
        plan.append(("ob", a))
        plan.extend(("mor", u) for u in by_obj[a])
    step_of: dict = {}
    for i, (kind, x) in enumerate(plan):
        step_of[x if kind == "mor" else C.id(x)] = i
    checks: list = [[] for _ in plan]
    for (g, f), gf in C.composition.items():
        if C.is_identity(g) or C.is_identity(f):
            continue
        checks[max(step_of[g], step_of[f], step_of[gf])].append((g, f, gf))

    fo: dict = {}
    fm: dict = {}
    used_o: set = set()
    used_m: set = set()

    def consistent(i):
        return all(fm[gf] == D.comp(fm[g], fm[f]) for g, f, gf in checks[i])

    def rec(i):
        if i == len(plan):
            yield Functor(C, D, dict(fo), dict(fm), check=False)
            return
        kind, x = plan[i]
        if kind == "ob":
            cands = list(objects.get(x, D.objects) if objects is not None else D.objects)
            if rng is not None:
                rng.shuffle(cands)
            for d in cands:
                if injective and d in used_o:
                    continue
                fo[x] = d
                fm[C.id(x)] = D.id(d)
                if consistent(i):
                    used_o.add(d)
                    used_m.add(D.id(d))
                    yield from rec(i + 1)
                    used_o.discard(d)
                    used_m.discard(D.id(d))
                del fo[x], fm[C.id(x)]
        else:
            s, t = C.morphisms[x]
            cands = list(D.hom(fo[s], fo[t]))
            if rng is not None:
                rng.shuffle(cands)
            for v in cands:
                if injective and v in used_m:
                    continue
                if allowed is not None and not allowed(x, v):
                    continue
                fm[x] = v
                if consistent(i):
                    used_m.add(v)
                    yield from rec(i + 1)
                    used_m.discard(v)
                del fm[x]

    yield from rec(0)


def find_isomorphism(C: FinCat, D: FinCat) -> Functor | None:
    if len(C.objects) != len(D.objects) or len(C.morphisms) != len(D.morphisms):
        return None
    for F in enumerate_functors(C, D, injective=True):
        return F
    return None


def count_functors(C: FinCat, D: FinCat, **kw) -> int:
    return sum(1 for _ in enumerate_functors(C, D, **kw))


__all__ = [
    "FinCat",
    "Functor",
    "FunctorClass",
    "boff_factorize",
    "boff_fill",
    "classify_functor",
    "discrete",
    "enumerate_functors",
    "find_isomorphism",
    "inverse",
    "is_isomorphism",
    "pairing",
    "product",
    "pullback",
    "relabel",
    "subcategory_generated",
    "terminal",
    "to_terminal",
    "unique_lift",
    "validate_functor",
]
