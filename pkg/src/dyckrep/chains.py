"""Maximal chains [lambda; w_k, ..., w_1] and the good-chain basis.

A chain is stored with its word in the order of addition, (w_k, ..., w_1):
w_k is added to the base first and w_1 last.  `chain.w(i)` returns the
weight with subscript i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .field import Q, T, RatFunc, to_string
from .posets import WeightedPoset


class ChainError(ValueError):
    pass


class NotExcellent(ChainError):
    pass


@dataclass(frozen=True)
class GoodChain:
    base: int
    word: tuple[RatFunc, ...]
    path: tuple[int, ...]  # base, base u w_k, ..., endpoint

    @property
    def k(self) -> int:
        return len(self.word)

    @property
    def endpoint(self) -> int:
        return self.path[-1]

    def w(self, i: int) -> RatFunc:
        if not 1 <= i <= self.k:
            raise IndexError(f"weight index {i} outside 1..{self.k}")
        return self.word[self.k - i]

    def weights(self) -> list[RatFunc]:
        """[w_1, ..., w_k]."""
        return list(reversed(self.word))

    def key(self) -> tuple:
        return (self.base, self.word)

    def notation(self, E: WeightedPoset) -> str:
        inner = ", ".join(to_string(x) for x in self.word)
        return f"[{E.label_str(self.base)}; {inner}]" if inner else f"[{E.label_str(self.base)}]"

    def to_json(self, E: WeightedPoset | None = None):
        return {"base": self.base, "word": [to_string(x) for x in self.word]}


def chain_from_word(E: WeightedPoset, base: int, word: Iterable[RatFunc]) -> GoodChain | None:
    """The chain adding `word` (in order) to `base`, or None if some step is not a cover."""
    path = [base]
    cur = base
    word = tuple(word)
    for x in word:
        cur = E.add(cur, x)
        if cur is None:
            return None
        path.append(cur)
    return GoodChain(base, word, tuple(path))


def is_good_word(word: Iterable[RatFunc]) -> bool:
    ws = list(word)
    s = set(ws)
    return not any(T * x in s for x in ws)


def is_good(chain: GoodChain) -> bool:
    return is_good_word(chain.word)


def _word_strings(E: WeightedPoset, word) -> tuple[str, ...]:
    cache = E._cache.setdefault("wstr", {})
    out = []
    for x in word:
        s = cache.get(x)
        if s is None:
            s = to_string(x)
            cache[x] = s
        out.append(s)
    return tuple(out)


def enumerate_good_chains(E: WeightedPoset, k: int) -> list[GoodChain]:
    if k < 0:
        raise ChainError("chain length must be nonnegative")
    cache = E._cache.setdefault("good_chains", {})
    if k in cache:
        return cache[k]
    if k == 0:
        out = [GoodChain(lam, (), (lam,)) for lam in range(len(E))]
    else:
        out = []
        for ch in enumerate_good_chains(E, k - 1):
            for x, nxt, _ in E.up[ch.endpoint]:
                word = ch.word + (x,)
                if is_good_word(word):
                    out.append(GoodChain(ch.base, word, ch.path + (nxt,)))
        out.sort(key=lambda c: (c.base, _word_strings(E, c.word)))
    cache[k] = out
    return out


def longest_good_chain(E: WeightedPoset) -> int:
    k = 0
    while enumerate_good_chains(E, k + 1):
        k += 1
    return k


def transposition_status(chain: GoodChain, i: int) -> str:
    if not 1 <= i <= chain.k - 1:
        raise IndexError(f"transposition index {i} outside 1..{chain.k - 1}")
    a, b = chain.w(i), chain.w(i + 1)
    if a == Q * b or b == Q * a:
        return "non_admissible"
    return "excellent"


def swapped_word(chain: GoodChain, i: int) -> tuple[RatFunc, ...]:
    word = list(chain.word)
    p = chain.k - i  # position of w_i
    word[p], word[p - 1] = word[p - 1], word[p]
    return tuple(word)


def apply_transposition(E: WeightedPoset, chain: GoodChain, i: int) -> GoodChain:
    if transposition_status(chain, i) != "excellent":
        raise NotExcellent(f"s_{i} is not admissible on {chain.notation(E)}")
    new = chain_from_word(E, chain.base, swapped_word(chain, i))
    if new is None:
        raise ChainError(f"s_{i} applied to {chain.notation(E)} leaves the poset")
    return new


def d_minus_chain(E: WeightedPoset, chain: GoodChain) -> GoodChain:
    """[lambda u w_k; w_{k-1}, ..., w_1]."""
    if chain.k == 0:
        raise ChainError("cannot remove from an empty word")
    return GoodChain(chain.path[1], chain.word[1:], chain.path[1:])


def extensions(E: WeightedPoset, chain: GoodChain) -> list[tuple[RatFunc, GoodChain]]:
    """Good chains [lambda; w, x]."""
    out = []
    for x, nxt, _ in E.up[chain.endpoint]:
        word = chain.word + (x,)
        if is_good_word(word):
            out.append((x, GoodChain(chain.base, word, chain.path + (nxt,))))
    return out


def transposition_orbit(E: WeightedPoset, chain: GoodChain) -> set[GoodChain]:
    seen = {chain}
    stack = [chain]
    while stack:
        c = stack.pop()
        for i in range(1, c.k):
            if transposition_status(c, i) == "excellent":
                d = apply_transposition(E, c, i)
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
    return seen
