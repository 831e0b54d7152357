"""Submodules spanned by good chains: V(I), U(I) for coideals I, and generated submodules."""

from __future__ import annotations

import itertools
from typing import Iterable

from ..chains import apply_transposition, extensions, transposition_status
from ..field import ONE
from ..report import Report
from .build import Representation
from .sparse import Subspace

ChainSet = dict[int, set[int]]  # level -> basis indices


class NotACoideal(ValueError):
    pass


def _empty(rep: Representation) -> ChainSet:
    return {k: set() for k in range(rep.K + 1)}


def v_span(rep: Representation, I: Iterable[int]) -> ChainSet:
    I = set(I)
    return {k: {j for j, ch in enumerate(rep.bases[k]) if ch.base in I} for k in range(rep.K + 1)}


def u_span(rep: Representation, I: Iterable[int]) -> ChainSet:
    I = set(I)
    return {k: {j for j, ch in enumerate(rep.bases[k]) if ch.endpoint in I} for k in range(rep.K + 1)}


def is_generator_closed(rep: Representation, S: ChainSet) -> Report:
    """A coordinate subspace is closed iff every generator column in S has support in S."""
    for k in range(rep.K + 1):
        for key in rep.generator_names(k):
            kt = Representation.target_level(key)
            M = rep.generator(key)
            target = S.get(kt, set())
            for j in S[k]:
                for i in M.column(j):
                    if i not in target:
                        return Report(False, "generator_closed",
                                      {"generator": list(key), "from": rep.bases[k][j].notation(rep.poset),
                                       "to": rep.bases[kt][i].notation(rep.poset)})
    return Report(True, "generator_closed")


def submodule_from_coideal(rep: Representation, I: Iterable[int]) -> tuple[ChainSet, ChainSet]:
    I = set(I)
    if not rep.poset.is_coideal(I):
        raise NotACoideal(f"{sorted(rep.poset.label_str(i) for i in I)} is not upward closed")
    V, U = v_span(rep, I), u_span(rep, I)
    for name, S in (("V", V), ("U", U)):
        rpt = is_generator_closed(rep, S)
        if not rpt.ok:
            raise AssertionError(f"{name}(I) is not a submodule: {rpt.witness}")
    return V, U


def submodule_closure(rep: Representation, seeds: Iterable[tuple[int, int]]) -> ChainSet:
    """Smallest set of good chains containing the seeds and closed under extending the
    endpoint, removing the base step, and admissible transpositions."""
    E = rep.poset
    out = _empty(rep)
    stack = list(seeds)
    while stack:
        k, j = stack.pop()
        if j in out[k]:
            continue
        out[k].add(j)
        ch = rep.bases[k][j]
        nxt = []
        if k < rep.K:
            for _, ext in extensions(E, ch):
                nxt.append((k + 1, rep.find(k + 1, ext.base, ext.word)))
        if k >= 1:
            nxt.append((k - 1, rep.find(k - 1, ch.path[1], ch.word[1:])))
        for i in range(1, k):
            if transposition_status(ch, i) == "excellent":
                sw = apply_transposition(E, ch, i)
                nxt.append((k, rep.find(k, sw.base, sw.word)))
        stack.extend(n for n in nxt if n[1] not in out[n[0]])
    return out


def matrix_closure(rep: Representation, seeds: Iterable[tuple[int, int]]) -> tuple[ChainSet, bool]:
    """Smallest generator-stable subspace containing the seed vectors, by repeated application.

    Returns the coordinate support per level and whether the subspace is a coordinate subspace.
    """
    spaces = {k: Subspace(rep.dim(k)) for k in range(rep.K + 1)}
    queue = []
    for k, j in seeds:
        v = spaces[k].add({j: ONE})
        if v is not None:
            queue.append((k, v))
    while queue:
        k, v = queue.pop()
        for key in rep.generator_names(k):
            kt = Representation.target_level(key)
            if kt > rep.K:
                continue
            w = rep.generator(key).apply(v)
            if not w:
                continue
            added = spaces[kt].add(w)
            if added is not None:
                queue.append((kt, added))
    support = {k: spaces[k].support() for k in spaces}
    coordinate = all(s.is_coordinate() and len(s) == len(support[k]) for k, s in spaces.items())
    return support, coordinate


def level_zero_coideal(rep: Representation, W: ChainSet) -> set[int]:
    """I_W: the elements lambda with [lambda] in W."""
    return {rep.bases[0][j].base for j in W.get(0, set())}


def check_sandwich(rep: Representation, W: ChainSet) -> Report:
    I = level_zero_coideal(rep, W)
    V, U = v_span(rep, I), u_span(rep, I)
    for k in range(rep.K + 1):
        if not V[k] <= W[k]:
            return Report(False, "sandwich", {"level": k, "side": "V(I_W) in W"})
        if not W[k] <= U[k]:
            return Report(False, "sandwich", {"level": k, "side": "W in U(I_W)"})
    return Report(True, "sandwich", details={"I_W": sorted(rep.poset.label_str(i) for i in I)})


def all_coideals(rep: Representation) -> list[frozenset[int]]:
    """Every coideal of the poset, by brute force over subsets (small posets only)."""
    E = rep.poset
    n = len(E)
    if n > 16:
        raise ValueError("coideal enumeration is exponential; poset too large")
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        S = {i for i in range(n) if bits[i]}
        if E.is_coideal(S):
            out.append(frozenset(S))
    return out
