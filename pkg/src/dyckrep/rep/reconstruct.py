"""Recover (E, c) from the matrices and weight data of a calibrated representation.

Only operator data is read: the z_i diagonals, the Delta weight records, and the
d_+ / d_- matrices.  Complete reducibility of each level over the affine Hecke
algebra is assumed rather than checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..edge import EdgeFunction
from ..field import ONE, RatFunc, to_string
from ..posets import InvalidPoset, WeightedPoset, isomorphic
from ..report import Report
from .build import Representation, build_rep, rebase_diagonal


class AssumptionViolated(ValueError):
    def __init__(self, which: str, detail: str = ""):
        self.which = which
        super().__init__(f"{which}: {detail}" if detail else which)


@dataclass
class Reconstruction:
    poset: WeightedPoset
    edge: EdgeFunction
    rebuilt: Representation
    normalization: list[list[RatFunc]]  # P(v); v / P(v) has all d_- coefficients 1
    matching: list[list[int]]           # rebuilt index -> input index per level
    round_trip: Report


def _z_word(rep: Representation, k: int, j: int) -> tuple[RatFunc, ...]:
    """(w_k, ..., w_1) read from the z eigenvalues."""
    return tuple(rep.z(k, i).get(j, j) for i in range(k, 0, -1))


def _content_minus(content: frozenset, word) -> frozenset:
    d = dict(content)
    for w in word:
        d[w] = d.get(w, 0) - 1
    return frozenset((b, m) for b, m in d.items() if m)


def _check_assumptions(rep: Representation) -> None:
    for k in range(rep.K + 1):
        seen = {}
        for j in range(rep.dim(k)):
            rec = (rep.record(k, j)[0], _z_word(rep, k, j))
            if rec in seen:
                raise AssumptionViolated("simple_spectrum", f"level {k}, vectors {seen[rec]} and {j}")
            seen[rec] = j
            if any(w.is_zero() for w in rec[1]):
                raise AssumptionViolated("simple_spectrum", f"zero z-eigenvalue at level {k}, vector {j}")
        if k >= 1:
            dm = rep.dminus(k)
            for j in range(rep.dim(k)):
                col = dm.column(j)
                if len(col) != 1:
                    raise AssumptionViolated("d_minus", f"d_- of vector {j} on level {k} has {len(col)} terms")


def reconstruct_poset(rep: Representation) -> Reconstruction:
    _check_assumptions(rep)
    n0 = rep.dim(0)
    contents = [rep.record(0, j)[0] for j in range(n0)]
    by_content = {c: j for j, c in enumerate(contents)}

    # normalization P(v) = d(v) P(d_- v)
    P: list[list[RatFunc]] = [[ONE] * n0]
    down: list[list[int]] = [[]]
    for k in range(1, rep.K + 1):
        dm = rep.dminus(k)
        Pk, dk = [], []
        for j in range(rep.dim(k)):
            ((i, d),) = dm.column(j).items()
            Pk.append(d * P[k - 1][i])
            dk.append(i)
        P.append(Pk)
        down.append(dk)

    # bases of level-k vectors: endpoint contents minus the word
    for k in range(rep.K + 1):
        for j in range(rep.dim(k)):
            base = _content_minus(rep.record(k, j)[0], _z_word(rep, k, j))
            if base not in by_content:
                raise AssumptionViolated("completeness", f"no level-0 vector with the base weight of ({k}, {j})")

    covers, values = [], []
    if rep.K >= 1:
        dp0 = rep.dplus(0)
        for j in range(rep.dim(1)):
            x = _z_word(rep, 1, j)[0]
            src = by_content[_content_minus(rep.record(1, j)[0], (x,))]
            dst = down[1][j]
            a = dp0.get(j, src)
            if a.is_zero():
                raise AssumptionViolated("d_plus", f"d_+ coefficient onto level-1 vector {j} vanishes")
            covers.append((src, dst, x))
            values.append(a * P[1][j])

    grades = [sum(m for _, m in c) for c in contents]
    try:
        E = WeightedPoset([f"e{j}" for j in range(n0)], [dict(c) for c in contents], grades, covers,
                          name=f"reconstructed({rep.poset.name})")
    except InvalidPoset as exc:
        raise AssumptionViolated("poset", str(exc)) from None
    c = EdgeFunction(E, values, name="reconstructed")
    rebuilt = build_rep(E, c, rep.K)
    normalized = rebase_diagonal(rep, [[p.inverse() for p in lvl] for lvl in P])

    matching = []
    for k in range(rep.K + 1):
        where = {(rep.record(k, j)[0], _z_word(rep, k, j)): j for j in range(rep.dim(k))}
        if rebuilt.dim(k) != rep.dim(k):
            raise AssumptionViolated("completeness", f"level {k}: {rebuilt.dim(k)} chains vs {rep.dim(k)} vectors")
        m = []
        for ch in rebuilt.bases[k]:
            key = (E.contents[ch.endpoint], ch.word)
            if key not in where:
                raise AssumptionViolated("completeness", f"chain {ch.notation(E)} has no matching vector")
            m.append(where[key])
        matching.append(m)
    return Reconstruction(E, c, rebuilt, P, matching, _compare(rebuilt, normalized, matching))


def _compare(rebuilt: Representation, normalized: Representation, matching: list[list[int]]) -> Report:
    n = 0
    for k in range(rebuilt.K + 1):
        for key in rebuilt.generator_names(k):
            kt = Representation.target_level(key)
            if kt > rebuilt.K:
                continue
            A, B = rebuilt.generator(key), normalized.generator(key)
            n += 1
            for j in range(A.ncols):
                col_a = {matching[kt][i]: v for i, v in A.column(j).items()}
                if col_a != B.column(matching[k][j]):
                    return Report(False, "round_trip", {"generator": list(key), "column": j})
    return Report(True, "round_trip", details={"generators_compared": n})


def check_reconstruction(rep: Representation) -> Report:
    rec = reconstruct_poset(rep)
    iso = isomorphic(rep.poset, rec.poset)
    if not iso.ok:
        return Report(False, "reconstruction", {"isomorphic": iso.witness})
    if not rec.round_trip.ok:
        return Report(False, "reconstruction", {"round_trip": rec.round_trip.witness})
    return Report(True, "reconstruction", details={"elements": len(rec.poset), "covers": len(rec.poset.covers),
                                                   "edge_values": [to_string(v) for v in rec.edge.values[:4]]})
