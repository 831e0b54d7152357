"""Chain counts of a product poset against the shuffle formula."""

from __future__ import annotations

from math import comb

from ..chains import enumerate_good_chains, is_good_word
from ..posets import WeightedPoset, product
from ..report import Report


def count_by_enumeration(P: WeightedPoset, k: int) -> int:
    return len(enumerate_good_chains(P, k))


def count_by_formula(E1: WeightedPoset, E2: WeightedPoset, k: int) -> int:
    return sum(comb(k, i) * len(enumerate_good_chains(E1, i)) * len(enumerate_good_chains(E2, k - i))
               for i in range(k + 1))


def _shuffles(n1: int, n2: int):
    if n1 == 0 and n2 == 0:
        yield ()
        return
    if n1:
        for s in _shuffles(n1 - 1, n2):
            yield (1,) + s
    if n2:
        for s in _shuffles(n1, n2 - 1):
            yield (2,) + s


def shuffle_chains(E1: WeightedPoset, E2: WeightedPoset, P: WeightedPoset, k: int) -> set[tuple]:
    """Interleave a good chain of E1 with one of E2 in every order and walk it in P."""
    n2 = len(E2)
    out = set()
    for i in range(k + 1):
        for a in enumerate_good_chains(E1, i):
            for b in enumerate_good_chains(E2, k - i):
                for order in _shuffles(i, k - i):
                    cur = a.base * n2 + b.base
                    word, ia, ib = [], 0, 0
                    for f in order:
                        if f == 1:
                            x = a.word[ia]
                            ia += 1
                        else:
                            x = b.word[ib]
                            ib += 1
                        cur = P.add(cur, x)
                        if cur is None:
                            raise AssertionError("shuffled step is not a cover of the product")
                        word.append(x)
                    if not is_good_word(word):
                        raise AssertionError("shuffle of good chains is not good")
                    out.add((a.base * n2 + b.base, tuple(word)))
    return out


def tensor_dim_check(E1: WeightedPoset, E2: WeightedPoset, k_max: int, P: WeightedPoset | None = None) -> Report:
    if P is None:
        P = product(E1, E2)
    rows = []
    for k in range(k_max + 1):
        direct = count_by_enumeration(P, k)
        formula = count_by_formula(E1, E2, k)
        shuffled = shuffle_chains(E1, E2, P, k)
        enumerated = {ch.key() for ch in enumerate_good_chains(P, k)}
        row = {"k": k, "product": direct, "formula": formula, "shuffle": len(shuffled),
               "bijective": shuffled == enumerated}
        rows.append(row)
        if not (direct == formula == len(shuffled) and row["bijective"]):
            return Report(False, "tensor_dim", row, {"rows": rows})
    return Report(True, "tensor_dim", details={"rows": rows})
