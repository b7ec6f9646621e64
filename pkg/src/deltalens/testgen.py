"""Seeded generators of small categories, lenses, spans and symmetric lenses.

Instances are built structurally (transition systems over a base category,
then functors found by randomised search) instead of by sampling raw tables,
so every generated value is valid by construction and the checkers act as
independent oracles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .category import (
    FinCat,
    Functor,
    boff_factorize,
    enumerate_functors,
    from_arrows,
    sort_key,
    subcategory_generated,
)
from .errors import GenerationFailed, LInapplicableAtBound
from .homcats import LensSpan, SymmetricLens, embed_lens_sym, identity_symlens
from .lenses import Cofunctor, Lens, LensDiagram, MealyMorphism, diagram_to_lens, rename_states
from .pushout import DEFAULT_BOUND

# -- fixture gallery ---------------------------------------------------------------


def ONE() -> FinCat:
    return from_arrows(["*"], {})


def TWO() -> FinCat:
    """The arrow category ``0 -> 1``."""
    return from_arrows(["0", "1"], {"u": ("0", "1")})


def DISC2() -> FinCat:
    return from_arrows(["0", "1"], {})


def IDEM() -> FinCat:
    """One object with a single idempotent ``e``."""
    return from_arrows(["*"], {"e": ("*", "*")}, {("e", "e"): "e"})


def PAR2() -> FinCat:
    """Two parallel arrows ``u, v: 0 -> 1``."""
    return from_arrows(["0", "1"], {"u": ("0", "1"), "v": ("0", "1")})


def THREE() -> FinCat:
    """The chain ``0 -> 1 -> 2``."""
    return from_arrows(
        ["0", "1", "2"],
        {"a": ("0", "1"), "b": ("1", "2"), "ba": ("0", "2")},
        {("b", "a"): "ba"},
    )


def CYCLE2() -> FinCat:
    """Two objects with mutually inverse arrows."""
    return from_arrows(
        ["0", "1"],
        {"s": ("0", "1"), "t": ("1", "0")},
        {("t", "s"): "id0", ("s", "t"): "id1"},
    )


FIXTURES = {
    "ONE": ONE,
    "TWO": TWO,
    "DISC2": DISC2,
    "IDEM": IDEM,
    "PAR2": PAR2,
    "THREE": THREE,
    "CYCLE2": CYCLE2,
}


def fixture(name: str) -> FinCat:
    return FIXTURES[name]()


# -- configuration -----------------------------------------------------------------


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_objects: int = 3
    max_generators: int = 3
    closure_bound: int = 6
    max_morphisms: int = 64
    max_states: int = 4
    loop_prob: float = 0.0
    attempts: int = 40

    def derive(self, tag: str, n: int = 0) -> "GenConfig":
        return replace(self, seed=derive_seed(self.seed, tag, n))


def derive_seed(seed: int, tag: str, n: int = 0) -> int:
    return random.Random(f"{seed}/{tag}/{n}").getrandbits(63)


def _rng(cfg: GenConfig, tag: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{tag}")


# -- categories ----------------------------------------------------------------------


def gen_category(cfg: GenConfig) -> FinCat:
    """Random subcategory of finite sets generated by random functions.

    Objects are small finite sets; generating morphisms are random functions
    between them.  Unless ``loop_prob`` allows otherwise, generators only run
    from lower to higher object index, so the result has no non-identity
    endomorphisms.  Parallel composites are identified exactly when they are
    the same function.
    """
    if cfg.max_objects < 1 or cfg.max_generators < 0:
        raise GenerationFailed("bounds must be positive")
    rng = _rng(cfg, "category")
    n = rng.randint(1, cfg.max_objects)
    sizes = [rng.choice((1, 2, 2, 3)) for _ in range(n)]
    ident = {i: (i, i, tuple(range(sizes[i]))) for i in range(n)}
    gens = set()
    for _ in range(rng.randint(0, cfg.max_generators)):
        if rng.random() < cfg.loop_prob:
            i, j = rng.randrange(n), rng.randrange(n)
        elif n > 1:
            i, j = sorted(rng.sample(range(n), 2))
        else:
            continue
        fn = tuple(rng.randrange(sizes[j]) for _ in range(sizes[i]))
        if (i, j, fn) != ident.get(i) or i != j:
            gens.add((i, j, fn))
    mors = set(ident.values()) | gens

    def comp(g, f):
        return (f[0], g[1], tuple(g[2][k] for k in f[2]))

    for _ in range(cfg.closure_bound):
        new = {comp(g, f) for f in mors for g in mors if g[0] == f[1]} - mors
        if not new:
            break
        mors |= new
        if len(mors) > cfg.max_morphisms:
            raise GenerationFailed(f"closure exceeds {cfg.max_morphisms} morphisms")
    else:
        if {comp(g, f) for f in mors for g in mors if g[0] == f[1]} - mors:
            raise GenerationFailed("composition did not close within the closure bound")

    objs = [f"o{i}" for i in range(n)]
    names = {ident[i]: f"id{objs[i]}" for i in range(n)}
    for k, m in enumerate(sorted(mors - set(ident.values()))):
        names[m] = f"m{k}"
    return FinCat(
        objs,
        {names[m]: (objs[m[0]], objs[m[1]]) for m in mors},
        {objs[i]: names[ident[i]] for i in range(n)},
        {(names[g], names[f]): names[comp(g, f)] for f in mors for g in mors if g[0] == f[1]},
    )


# -- transition systems ---------------------------------------------------------------


def random_copresheaf(C: FinCat, rng: random.Random, max_states: int):
    """A random quotient of a sum of representable copresheaves on ``C``.

    Returns ``(states, anchor, act)`` where ``act[(s, u)]`` is the state
    reached from ``s`` along ``u``.
    """
    roots = [rng.choice(C.objects) for _ in range(rng.randint(1, 2))]
    elems = [(i, w) for i, b in enumerate(roots) for w in C.out(b)]
    parent = {e: e for e in elems}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=sort_key)] = min(ra, rb, key=sort_key)
            return True
        return False

    def close():
        changed = True
        while changed:
            changed = False
            for u in C.morphisms:
                seen = {}
                for e in elems:
                    if C.tgt(e[1]) != C.src(u):
                        continue
                    img = find((e[0], C.comp(u, e[1])))
                    r = find(e)
                    if r in seen and find(seen[r]) != img:
                        changed |= union(seen[r], img)
                    seen.setdefault(r, img)

    def mergeable():
        by_fibre = {}
        for e in elems:
            by_fibre.setdefault(C.tgt(e[1]), set()).add(find(e))
        return [sorted(v, key=sort_key) for v in by_fibre.values() if len(v) > 1]

    for _ in range(rng.randint(0, len(elems))):
        groups = mergeable()
        if not groups:
            break
        a, b = rng.sample(rng.choice(groups), 2)
        union(a, b)
        close()
    while len({find(e) for e in elems}) > max_states:
        groups = mergeable()
        if not groups:
            break
        a, b = rng.sample(rng.choice(groups), 2)
        union(a, b)
        close()
    classes = sorted({find(e) for e in elems}, key=sort_key)
    name = {r: f"s{k}" for k, r in enumerate(classes)}
    states = [name[r] for r in classes]
    anchor = {name[r]: C.tgt(r[1]) for r in classes}
    act = {}
    for r in classes:
        for u in C.out(C.tgt(r[1])):
            act[(name[r], u)] = name[find((r[0], C.comp(u, r[1])))]
    return states, anchor, act


def _elements(C: FinCat, states, anchor, act) -> tuple[FinCat, Functor]:
    """Category of elements of a transition system and its projection to ``C``."""
    mors = {(s, u): (s, act[(s, u)]) for s in states for u in C.out(anchor[s])}
    ids = {s: (s, C.id(anchor[s])) for s in states}
    X = FinCat.generate(states, mors, ids, lambda g, f: (f[0], C.comp(g[1], f[1])), check=False)
    return X, Functor(X, C, dict(anchor), {k: k[1] for k in mors}, check=False)


def gen_lens(cfg: GenConfig, B: FinCat) -> Lens:
    """Random lens into ``B``.

    A transition system over ``B`` gives a discrete opfibration; its source
    is included identity-on-objects into a random intermediate of its bo-ff
    image, and the lens is read off that diagram.
    """
    rng = _rng(cfg, "lens")
    states, anchor, act = random_copresheaf(B, rng, cfg.max_states)
    Lam, opf = _elements(B, states, anchor, act)
    e, image, m = boff_factorize(opf)
    base = set(e.mor.values())
    extra = [w for w in image.non_identities() if w not in base and rng.random() < 0.3]
    A = subcategory_generated(image, sorted(base, key=sort_key) + extra)
    incl = Functor(Lam, A, dict(e.ob), dict(e.mor), check=False)
    get = Functor(A, B, dict(m.ob), {w: m.mor[w] for w in A.morphisms}, check=False)
    return diagram_to_lens(LensDiagram(Lam, incl, opf, get))


def gen_cofunctor(cfg: GenConfig, B: FinCat) -> Cofunctor:
    return gen_lens(cfg, B).put


def _random_functor(C: FinCat, D: FinCat, rng: random.Random, objects=None):
    return next(enumerate_functors(C, D, objects=objects, rng=rng), None)


def _random_fibred_action(B: FinCat, fibre: dict, rng: random.Random, budget: int = 20000):
    """Random action of ``B`` on the given fibres, or None.

    Solved as a small constraint problem: one variable per (state,
    non-identity morphism), checked against every composition law as soon
    as all of its values are known.
    """
    variables = [(x, u) for u in B.non_identities() for x in fibre[B.src(u)]]
    if any(not fibre[B.tgt(u)] for _, u in variables):
        return None
    act = {(x, B.id(b)): x for b in B.objects for x in fibre[b]}
    laws = [(g, f, gf) for (g, f), gf in B.composition.items()
            if not (B.is_identity(g) or B.is_identity(f))]
    steps = 0

    def ok():
        for g, f, gf in laws:
            for x in fibre[B.src(f)]:
                y = act.get((x, f))
                if y is None:
                    continue
                z, w = act.get((y, g)), act.get((x, gf))
                if z is not None and w is not None and z != w:
                    return False
        return True

    def rec(i):
        nonlocal steps
        if i == len(variables):
            return True
        x, u = variables[i]
        cands = list(fibre[B.tgt(u)])
        rng.shuffle(cands)
        for y in cands:
            steps += 1
            if steps > budget:
                return False
            act[variables[i]] = y
            if ok() and rec(i + 1):
                return True
            del act[variables[i]]
        return False

    return act if rec(0) else None


def gen_mealy(cfg: GenConfig, A: FinCat, B: FinCat) -> MealyMorphism:
    """Random transition system over ``A`` with outputs from a random functor into ``B``."""
    rng = _rng(cfg, "mealy")
    states, g0, act = random_copresheaf(A, rng, cfg.max_states)
    X, _ = _elements(A, states, g0, act)
    F = _random_functor(X, B, rng)
    return MealyMorphism(A, B, states, g0, dict(F.ob), act, {k: F.mor[k] for k in X.morphisms})


def gen_symlens(cfg: GenConfig, A: FinCat, B: FinCat) -> SymmetricLens:
    """Random symmetric lens between ``A`` and ``B``.

    The forward transition system is a random transition system over ``A``
    with outputs given by a random functor into ``B``; the backward
    transition table is a random action of ``B`` on the fibres of the
    resulting right anchor, with outputs given by a random functor into ``A``.
    """
    for attempt in range(cfg.attempts):
        rng = _rng(cfg.derive("symlens", attempt), "symlens")
        states, g0, act = random_copresheaf(A, rng, min(cfg.max_states * 2, 8))
        plus, plus_leg = _elements(A, states, g0, act)
        F = _random_functor(plus, B, rng)
        if F is None:
            continue
        f0 = dict(F.ob)
        fibre = {b: [x for x in states if f0[x] == b] for b in B.objects}
        back = _random_fibred_action(B, fibre, rng)
        if back is None:
            continue
        minus, minus_leg = _elements(B, states, f0, back)
        G = _random_functor(minus, A, rng, objects={x: [g0[x]] for x in states})
        if G is None:
            continue
        forward = MealyMorphism(
            A, B, states, g0, f0, act, {k: F.mor[k] for k in plus.morphisms}
        )
        backward = MealyMorphism(
            B, A, states, f0, g0, back, {k: G.mor[k] for k in minus.morphisms}
        )
        s = SymmetricLens(forward, backward)
        rename = {x: f"x{k}" for k, x in enumerate(states)}
        return SymmetricLens(rename_states(s.forward, rename), rename_states(s.backward, rename), check=False)
    raise GenerationFailed(f"no symmetric lens found in {cfg.attempts} attempts")


def gen_span(cfg: GenConfig, A: FinCat, B: FinCat) -> LensSpan:
    """Random span of lenses between ``A`` and ``B``.

    The apex is either the pushout of a random symmetric lens's transition
    categories or a random wide subcategory of the image of its anchor
    pairing containing both transition categories.
    """
    from .adjunction import apply_L, r_construction

    rng = _rng(cfg, "span")
    s = gen_symlens(cfg.derive("span-symlens"), A, B)
    if rng.random() < 0.3:
        try:
            return apply_L(s, DEFAULT_BOUND)
        except LInapplicableAtBound:
            pass
    rc = r_construction(s)
    image = rc.image
    base = set(rc.sigma.mor.values()) | set(rc.tau.mor.values())
    p_extra = rng.choice((0.0, 0.3, 1.0))
    extra = [w for w in image.non_identities() if w not in base and rng.random() < p_extra]
    X = subcategory_generated(image, sorted(base, key=sort_key) + extra)
    legs = []
    for lens in (rc.span.left, rc.span.right):
        get = Functor(X, lens.view, dict(lens.get.ob), {w: lens.get.mor[w] for w in X.morphisms}, check=False)
        put = Cofunctor(lens.view, X, dict(lens.put.obj_map), dict(lens.put.lift), check=False)
        legs.append(Lens(get, put, check=False))
    return LensSpan(X, legs[0], legs[1])


def degenerate_symlens(A: FinCat) -> SymmetricLens:
    return identity_symlens(A)


__all__ = [
    "FIXTURES",
    "GenConfig",
    "embed_lens_sym",
    "fixture",
    "gen_category",
    "gen_cofunctor",
    "gen_lens",
    "gen_mealy",
    "gen_span",
    "gen_symlens",
]
