"""Module maps V(E, c) -> V(E', c') induced by poset maps."""

from __future__ import annotations

from typing import Mapping

from ..field import ONE, RatFunc, to_string
from ..posets import PosetMap
from ..report import Report
from .build import Representation
from .sparse import SparseMatrix, nullspace


class MapConditionViolated(ValueError):
    def __init__(self, condition: int, witness: dict | None = None):
        self.condition = condition
        self.witness = witness or {}
        super().__init__(f"poset map violates condition ({condition}): {self.witness}")


class IncompatibleEdgeFunctions(ValueError):
    pass


def _alpha_table(rep1: Representation, F: PosetMap, alphas: Mapping[int, RatFunc] | None) -> list[RatFunc]:
    """alpha must be constant along covers whose top is not sent to 0; propagate given values."""
    E = rep1.poset
    given = dict(alphas or {})
    out: list[RatFunc | None] = [None] * len(E)
    for start in range(len(E)):
        if out[start] is not None:
            continue
        comp, stack = [start], [start]
        seen = {start}
        while stack:
            a = stack.pop()
            nbrs = [d for _, d, _ in E.up[a] if F(d) is not None]
            nbrs += [s for _, s, _ in E.down[a] if F(a) is not None]
            for b in nbrs:
                if b not in seen:
                    seen.add(b)
                    comp.append(b)
                    stack.append(b)
        vals = {given[i] for i in comp if i in given}
        if len(vals) > 1:
            raise IncompatibleEdgeFunctions("alpha scalars must agree along covers kept by the map")
        val = vals.pop() if vals else ONE
        for i in comp:
            out[i] = val
    return out  # type: ignore[return-value]


def check_compatible(rep1: Representation, rep2: Representation, F: PosetMap) -> Report:
    """c'(F(mu); x) = c(mu; x) on every cover mu -> mu u x with F(mu u x) defined."""
    E, c1, c2 = rep1.poset, rep1.edge, rep2.edge
    for cv in E.covers:
        if F(cv.dst) is None:
            continue
        v1, v2 = c1.values[E.cover(cv.src, cv.weight)], c2(F(cv.src), cv.weight)
        if v1 != v2:
            return Report(False, "compatible_edges", {"lambda": E.label_str(cv.src), "x": to_string(cv.weight),
                                                      "source": to_string(v1), "target": to_string(v2)})
    return Report(True, "compatible_edges")


def hom_from_posetmap(rep1: Representation, rep2: Representation, F: PosetMap,
                      alphas: Mapping[int, RatFunc] | None = None, check: bool = True) -> list[SparseMatrix]:
    """Level matrices of [lambda; w] -> alpha_lambda [F(lambda); w] (0 if F(endpoint) = 0)."""
    rpt = F.check()
    if not rpt.ok:
        raise MapConditionViolated(rpt.witness["condition"], rpt.witness)
    comp = check_compatible(rep1, rep2, F)
    if not comp.ok:
        raise IncompatibleEdgeFunctions(str(comp.witness))
    alpha = _alpha_table(rep1, F, alphas)
    mats = []
    for k in range(rep1.K + 1):
        cols = {}
        for j, ch in enumerate(rep1.bases[k]):
            if F(ch.endpoint) is None:
                continue
            i = rep2.find(k, F(ch.base), ch.word)
            if i is None:
                raise IncompatibleEdgeFunctions(f"image of {ch.notation(rep1.poset)} is not a basis chain")
            cols[j] = {i: alpha[ch.base]}
        mats.append(SparseMatrix(rep2.dim(k), rep1.dim(k), cols))
    if check:
        rpt = check_hom_commutes(rep1, rep2, mats)
        if not rpt.ok:
            raise AssertionError(f"map does not commute: {rpt.witness}")
    return mats


def check_hom_commutes(rep1: Representation, rep2: Representation, mats: list[SparseMatrix]) -> Report:
    def H(k: int) -> SparseMatrix:
        if k <= rep1.K:
            return mats[k]
        return SparseMatrix(rep2.dim(k), rep1.dim(k))

    n = 0
    for k in range(rep1.K + 1):
        for key in rep1.generator_names(k) + ([("phi", k)] if k >= 1 else []):
            kt = Representation.target_level(key)
            if not rep1.has_level(kt) or not rep2.has_level(kt) or not rep2.has_level(k):
                continue
            lhs = rep2.generator(key) @ H(k)
            rhs = H(kt) @ rep1.generator(key)
            n += 1
            diff = lhs.first_difference(rhs)
            if diff is not None:
                i, j, v = diff
                return Report(False, "hom_commutes", {"generator": list(key), "row": i, "col": j,
                                                      "residual": to_string(v)})
    return Report(True, "hom_commutes", details={"checks": n})


def kernel_support(mats: list[SparseMatrix]) -> tuple[dict[int, set[int]], bool]:
    """Per-level coordinate support of the kernel and whether it is a coordinate subspace."""
    out, coordinate = {}, True
    for k, M in enumerate(mats):
        basis = nullspace(M)
        supp: set[int] = set()
        for v in basis:
            supp |= set(v)
            if len(v) != 1:
                coordinate = False
        out[k] = supp
    return out, coordinate
