"""Commuting operators E_i = (-1)^(i-1) d_- y_1^(i-1) d_+ on level 0."""

from __future__ import annotations

from ..field import to_string
from ..report import Report
from .build import Representation, RepError
from .sparse import SparseMatrix, power


def sym_generators(rep: Representation, i_max: int) -> list[SparseMatrix]:
    if rep.K < 1 and not rep.complete:
        raise RepError("E_i needs level 1")
    n0 = rep.dim(0)
    if rep.dim(1) == 0:
        return [SparseMatrix(n0, n0) for _ in range(i_max)]
    dp, dm, y1 = rep.dplus(0), rep.dminus(1), rep.y(1, 1)
    out = []
    for i in range(1, i_max + 1):
        M = dm @ power(y1, i - 1) @ dp
        out.append(M if i % 2 else -M)
    return out


def check_sym_commute(rep: Representation, i_max: int) -> Report:
    gens = sym_generators(rep, i_max)
    for a in range(i_max):
        for b in range(a + 1, i_max):
            diff = (gens[a] @ gens[b]).first_difference(gens[b] @ gens[a])
            if diff is not None:
                i, j, v = diff
                return Report(False, "sym_commute", {"i": a + 1, "j": b + 1, "row": i, "col": j,
                                                     "residual": to_string(v)})
    return Report(True, "sym_commute", details={"pairs": i_max * (i_max - 1) // 2,
                                                "nonzero": [not g.is_zero() for g in gens]})
