"""Pushouts of two categories along a shared discrete category of objects.

A morphism of the pushout is an alternating word of non-identity letters,
each letter tagged with the summand it came from.  Words are stored in
application order: the first letter is applied first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .category import FinCat, Functor, Ident
from .errors import NotSaturated, PreconditionViolated

PLUS = "+"
MINUS = "-"
DEFAULT_BOUND = 8


def reduce_word(letters: Iterable[tuple], summands: dict) -> tuple:
    """Normal form of a composable sequence of tagged letters.

    Adjacent letters from the same summand are merged through that summand's
    composition table; letters that merge to an identity are deleted.
    """
    stack: list = []
    for side, u in letters:
        C = summands[side]
        if C.is_identity(u):
            continue
        if stack and stack[-1][0] == side:
            _, prev = stack.pop()
            u = C.comp(u, prev)
            if C.is_identity(u):
                continue
        stack.append((side, u))
    return tuple(stack)


def reduce_word_randomly(letters: Iterable[tuple], summands: dict, rng: random.Random) -> tuple:
    """Same rewriting as :func:`reduce_word` but merging in a random order."""
    word = [(s, u) for s, u in letters if not summands[s].is_identity(u)]
    while True:
        spots = [i for i in range(len(word) - 1) if word[i][0] == word[i + 1][0]]
        if not spots:
            return tuple(word)
        i = rng.choice(spots)
        side = word[i][0]
        C = summands[side]
        merged = C.comp(word[i + 1][1], word[i][1])
        word[i : i + 2] = [] if C.is_identity(merged) else [(side, merged)]


@dataclass
class PresentedCategory:
    objects: tuple
    plus: FinCat
    minus: FinCat
    bound: int
    words: list = field(default_factory=list)
    word_counts: list = field(default_factory=list)
    saturated: bool = False

    @property
    def summands(self) -> dict:
        return {PLUS: self.plus, MINUS: self.minus}

    @property
    def generators(self) -> list:
        return [(PLUS, u) for u in self.plus.non_identities()] + [
            (MINUS, u) for u in self.minus.non_identities()
        ]

    def endpoints(self, morphism: tuple) -> tuple:
        src, word = morphism
        if not word:
            return src, src
        side, last = word[-1]
        return src, self.summands[side].tgt(last)

    def compose(self, g: tuple, f: tuple) -> tuple:
        """``g ∘ f`` on morphisms written ``(source, word)``."""
        return f[0], reduce_word(f[1] + g[1], self.summands)

    def to_fincat(self) -> FinCat:
        if not self.saturated:
            raise NotSaturated(self.bound, self.word_counts)
        mors = {w: self.endpoints(w) for w in self.words}
        ids = {x: (x, ()) for x in self.objects}
        return FinCat.generate(self.objects, mors, ids, self.compose, check=False)


def enumerate_words(objects: Iterable[Ident], plus: FinCat, minus: FinCat, bound: int = DEFAULT_BOUND) -> PresentedCategory:
    """List every normal-form word of length at most ``bound``.

    The listing is saturated exactly when no normal form of length
    ``bound + 1`` exists, i.e. when composing listed words never produces a
    word outside the listing.
    """
    objects = tuple(objects)
    if set(plus.objects) != set(objects) or set(minus.objects) != set(objects):
        raise PreconditionViolated("both summands must have exactly the shared objects")
    if bound < 0:
        raise PreconditionViolated("bound must be non-negative")
    summands = {PLUS: plus, MINUS: minus}
    layer = [(x, ()) for x in objects]
    words = list(layer)
    counts = [len(layer)]
    for length in range(1, bound + 2):
        nxt = []
        for src, word in layer:
            if word:
                side, last = word[-1]
                here = summands[side].tgt(last)
                sides = (MINUS,) if side == PLUS else (PLUS,)
            else:
                here, sides = src, (PLUS, MINUS)
            for s in sides:
                C = summands[s]
                for u in C.out(here):
                    if not C.is_identity(u):
                        nxt.append((src, word + ((s, u),)))
        if length == bound + 1:
            saturated = not nxt
            break
        words.extend(nxt)
        counts.append(len(nxt))
        layer = nxt
    return PresentedCategory(objects, plus, minus, bound, words, counts, saturated)


def pushout_ioo(
    objects: Iterable[Ident], plus: FinCat, minus: FinCat, bound: int = DEFAULT_BOUND
) -> tuple[PresentedCategory, Functor, Functor]:
    """Pushout of ``plus <- objects -> minus`` along identity-on-objects inclusions.

    Raises :class:`NotSaturated` when normal forms longer than ``bound``
    exist (the pushout may then be infinite).
    """
    P = enumerate_words(objects, plus, minus, bound)
    if not P.saturated:
        raise NotSaturated(bound, P.word_counts)
    cat = P.to_fincat()
    return P, injection(P, cat, PLUS), injection(P, cat, MINUS)


def injection(P: PresentedCategory, cat: FinCat, side: str) -> Functor:
    C = P.summands[side]
    on_mor = {}
    for u, (s, _) in C.morphisms.items():
        on_mor[u] = (s, ()) if C.is_identity(u) else (s, ((side, u),))
    return Functor(C, cat, {x: x for x in C.objects}, on_mor, check=False)


def total_words(P: PresentedCategory) -> int:
    return sum(P.word_counts)


def copair(P: PresentedCategory, cat: FinCat, on_plus: Functor, on_minus: Functor) -> Functor:
    """The functor out of the pushout restricting to ``on_plus`` and ``on_minus``."""
    if on_plus.cod != on_minus.cod:
        raise PreconditionViolated("copairing needs a common codomain")
    Y = on_plus.cod
    for x in P.objects:
        if on_plus.ob[x] != on_minus.ob[x]:
            raise PreconditionViolated(f"functors disagree on shared object {x!r}", x)
    legs = {PLUS: on_plus, MINUS: on_minus}
    on_mor = {}
    for w in cat.morphisms:
        src, word = w
        acc = Y.id(on_plus.ob[src])
        for side, u in word:
            acc = Y.comp(legs[side].mor[u], acc)
        on_mor[w] = acc
    return Functor(cat, Y, dict(on_plus.ob), on_mor, check=False)
