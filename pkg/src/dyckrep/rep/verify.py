"""Exact verification of every defining relation on a Representation."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from ..field import Q, T, RatFunc, to_string
from ..report import Report
from .build import DELTA_POWERS, Representation, RepError
from .sparse import SparseMatrix, power

PASS, FAIL, SKIP = "pass", "fail", "boundary-skipped"


@dataclass
class RelationReport:
    results: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["status"] != FAIL for r in self.results)

    def __bool__(self) -> bool:
        return self.ok

    def families(self) -> list[str]:
        return sorted({r["family"] for r in self.results})

    def failures(self) -> list[dict[str, Any]]:
        return [r for r in self.results if r["status"] == FAIL]

    def skipped(self) -> list[dict[str, Any]]:
        return [r for r in self.results if r["status"] == SKIP]

    def by_family(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for r in self.results:
            prev = out.get(r["family"], PASS)
            if r["status"] == FAIL or (r["status"] == SKIP and prev == PASS):
                prev = r["status"]
            out[r["family"]] = prev
        return out

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "families": self.by_family(), "results": self.results}


# A check yields (label, lhs, rhs, level_out, level_in); matrices are compared exactly.
Check = tuple[str, SparseMatrix, SparseMatrix, int, int]


def _ident(rep: Representation, k: int) -> SparseMatrix:
    return SparseMatrix.identity(rep.dim(k))


def _hecke(rep, k) -> Iterator[Check]:
    for i in range(1, k):
        Ti = rep.T(k, i)
        I = _ident(rep, k)
        yield f"i={i}", (Ti - I) @ (Ti + I.scale(Q)), SparseMatrix(rep.dim(k), rep.dim(k)), k, k


def _braid(rep, k) -> Iterator[Check]:
    for i in range(1, k - 1):
        a, b = rep.T(k, i), rep.T(k, i + 1)
        yield f"i={i}", a @ b @ a, b @ a @ b, k, k


def _far_commute(rep, k) -> Iterator[Check]:
    for i in range(1, k):
        for j in range(i + 2, k):
            a, b = rep.T(k, i), rep.T(k, j)
            yield f"i={i},j={j}", a @ b, b @ a, k, k


def _z_commute(rep, k) -> Iterator[Check]:
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            a, b = rep.z(k, i), rep.z(k, j)
            yield f"i={i},j={j}", a @ b, b @ a, k, k


def _tz(rep, k) -> Iterator[Check]:
    for i in range(1, k):
        Ti = rep.Tinv(k, i)
        yield f"i={i}", Ti @ rep.z(k, i + 1) @ Ti, rep.z(k, i).scale(1 / Q), k, k


def _z_t_far(rep, k) -> Iterator[Check]:
    for j in range(1, k):
        for i in range(1, k + 1):
            if i in (j, j + 1):
                continue
            yield f"i={i},j={j}", rep.z(k, i) @ rep.T(k, j), rep.T(k, j) @ rep.z(k, i), k, k


def _dm2_t(rep, k) -> Iterator[Check]:
    if k >= 2:
        dm2 = rep.dminus(k - 1) @ rep.dminus(k)
        yield "", dm2 @ rep.T(k, k - 1), dm2, k - 2, k


def _dm_t(rep, k) -> Iterator[Check]:
    for i in range(1, k - 1):
        yield f"i={i}", rep.dminus(k) @ rep.T(k, i), rep.T(k - 1, i) @ rep.dminus(k), k - 1, k


def _t1_dp2(rep, k) -> Iterator[Check]:
    dp2 = rep.dplus(k + 1) @ rep.dplus(k)
    yield "", rep.T(k + 2, 1) @ dp2, dp2, k + 2, k


def _dp_t(rep, k) -> Iterator[Check]:
    for i in range(1, k):
        yield f"i={i}", rep.dplus(k) @ rep.T(k, i), rep.T(k + 1, i + 1) @ rep.dplus(k), k + 1, k


def _phi_dm(rep, k) -> Iterator[Check]:
    if k >= 2:
        lhs = (rep.phi(k - 1) @ rep.dminus(k)).scale(Q)
        rhs = rep.dminus(k) @ rep.phi(k) @ rep.T(k, k - 1)
        yield "", lhs, rhs, k - 1, k


def _phi_dp(rep, k) -> Iterator[Check]:
    if k >= 1:
        lhs = rep.T(k + 1, 1) @ rep.phi(k + 1) @ rep.dplus(k)
        rhs = (rep.dplus(k) @ rep.phi(k)).scale(Q)
        yield "", lhs, rhs, k + 1, k


def _z_dm(rep, k) -> Iterator[Check]:
    for i in range(1, k):
        yield f"i={i}", rep.z(k - 1, i) @ rep.dminus(k), rep.dminus(k) @ rep.z(k, i), k - 1, k


def _dp_z(rep, k) -> Iterator[Check]:
    for i in range(1, k + 1):
        yield f"i={i}", rep.dplus(k) @ rep.z(k, i), rep.z(k + 1, i + 1) @ rep.dplus(k), k + 1, k


def _z1_rel(rep, k) -> Iterator[Check]:
    if k >= 1:
        pm = rep.dplus(k - 1) @ rep.dminus(k)
        mp = rep.dminus(k + 1) @ rep.dplus(k)
        lhs = rep.z(k, 1) @ (pm.scale(Q) - mp)
        rhs = ((pm - mp) @ rep.z(k, k)).scale(Q * T)
        yield "", lhs, rhs, k, k


def _phi_def(rep, k) -> Iterator[Check]:
    if k >= 1:
        pm = rep.dplus(k - 1) @ rep.dminus(k)
        mp = rep.dminus(k + 1) @ rep.dplus(k)
        yield "", rep.phi(k), (pm - mp).scale(1 / (Q - 1)), k, k


def _delta_t(rep, k) -> Iterator[Check]:
    for m in DELTA_POWERS:
        D = rep.delta(k, m)
        for i in range(1, k):
            yield f"m={m},i={i}", D @ rep.T(k, i), rep.T(k, i) @ D, k, k
        for i in range(1, k + 1):
            yield f"m={m},z{i}", D @ rep.z(k, i), rep.z(k, i) @ D, k, k


def _delta_dm(rep, k) -> Iterator[Check]:
    if k >= 1:
        for m in DELTA_POWERS:
            yield f"m={m}", rep.delta(k - 1, m) @ rep.dminus(k), rep.dminus(k) @ rep.delta(k, m), k - 1, k


def _delta_dp(rep, k) -> Iterator[Check]:
    for m in DELTA_POWERS:
        lhs = rep.delta(k + 1, m) @ rep.dplus(k) - rep.dplus(k) @ rep.delta(k, m)
        yield f"m={m}", lhs, power(rep.z(k + 1, 1), m) @ rep.dplus(k), k + 1, k


FAMILIES: dict[str, Callable[[Representation, int], Iterator[Check]]] = {
    "hecke": _hecke,
    "braid": _braid,
    "far_commutation": _far_commute,
    "z_commute": _z_commute,
    "Tinv_z_Tinv": _tz,
    "z_T_commute": _z_t_far,
    "dm2_T": _dm2_t,
    "dm_T": _dm_t,
    "T1_dp2": _t1_dp2,
    "dp_T": _dp_t,
    "phi_dm": _phi_dm,
    "T1_phi_dp": _phi_dp,
    "z_dm": _z_dm,
    "dp_z": _dp_z,
    "z1_relation": _z1_rel,
    "phi_definition": _phi_def,
    "delta_T_z": _delta_t,
    "delta_dm": _delta_dm,
    "delta_dp": _delta_dp,
}


def _label(rep: Representation, k: int, idx: int) -> Any:
    if 0 <= k <= rep.K:
        return rep.bases[k][idx].notation(rep.poset)
    return idx


def _run_one(rep: Representation, family: str, k: int) -> list[dict[str, Any]]:
    out = []
    try:
        checks = list(FAMILIES[family](rep, k))
    except RepError as exc:
        return [{"family": family, "level": k, "status": SKIP, "reason": str(exc)}]
    for label, lhs, rhs, k_out, k_in in checks:
        diff = lhs.first_difference(rhs)
        entry: dict[str, Any] = {"family": family, "level": k, "status": PASS}
        if label:
            entry["case"] = label
        if diff is not None:
            i, j, v = diff
            entry["status"] = FAIL
            entry["witness"] = {"row": _label(rep, k_out, i), "col": _label(rep, k_in, j),
                                "residual": to_string(v)}
        out.append(entry)
    if not out:
        out.append({"family": family, "level": k, "status": PASS, "case": "vacuous"})
    return out


def _threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    try:
        return max(1, int(os.environ.get("BQT_THREADS", "1")))
    except ValueError:
        return 1


def _record_bookkeeping(rep: Representation) -> list[dict[str, Any]]:
    """d_+ adds exactly the new weight to the record; d_- keeps the contents and drops w_k."""
    out = []
    for k in range(rep.K + 1):
        status, witness = PASS, None
        if rep.dplus_available(k) and k < rep.K:
            for i, j, _ in rep.dplus(k).entries():
                (c0, w0), (c1, w1) = rep.record(k, j), rep.record(k + 1, i)
                x = w1[-1] if w1 else None
                added = dict(c0)
                if x is not None:
                    added[x] = added.get(x, 0) + 1
                if w1[:-1] != w0 or frozenset((b, m) for b, m in added.items() if m) != c1:
                    status, witness = FAIL, {"row": _label(rep, k + 1, i), "col": _label(rep, k, j)}
                    break
        if status == PASS and k >= 1:
            for i, j, _ in rep.dminus(k).entries():
                (c0, w0), (c1, w1) = rep.record(k, j), rep.record(k - 1, i)
                if c0 != c1 or w0[1:] != w1:
                    status, witness = FAIL, {"row": _label(rep, k - 1, i), "col": _label(rep, k, j)}
                    break
        entry: dict[str, Any] = {"family": "weight_records", "level": k, "status": status}
        if witness:
            entry["witness"] = witness
        out.append(entry)
    return out


def verify_relations(rep: Representation, families: list[str] | None = None,
                     threads: int | None = None) -> RelationReport:
    names = list(FAMILIES) if families is None else families
    jobs = [(f, k) for f in names for k in range(rep.K + 1)]
    rep.materialize()  # the matrix cache is filled before any worker reads it
    n = _threads(threads)
    if n == 1:
        chunks = [_run_one(rep, f, k) for f, k in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            chunks = list(ex.map(lambda job: _run_one(rep, *job), jobs))
    results = [r for chunk in chunks for r in chunk]
    if families is None:
        results += _record_bookkeeping(rep)
    return RelationReport(results)


def check_calibrated(rep: Representation) -> Report:
    """Joint spectrum of the z's and Deltas is simple on each level and no z-eigenvalue is zero."""
    for k in range(rep.K + 1):
        seen: dict[tuple, int] = {}
        for j in range(rep.dim(k)):
            rec = rep.record(k, j)
            if rec in seen:
                return Report(False, "calibrated", {"level": k, "vectors": [_label(rep, k, seen[rec]), _label(rep, k, j)],
                                                    "reason": "repeated joint eigenvalue"})
            seen[rec] = j
            for i in range(1, k + 1):
                if rep.z(k, i).get(j, j).is_zero():
                    return Report(False, "calibrated", {"level": k, "vector": _label(rep, k, j),
                                                        "reason": f"z_{i} eigenvalue is zero"})
    return Report(True, "calibrated", details={"levels": rep.K + 1})


def diagonal_intertwines(rep1: Representation, rep2: Representation,
                         diag: Callable[[int, int], RatFunc]) -> Report:
    """Check D rep1(b) = rep2(b) D for every generator b, with D diagonal, D[k][j] = diag(k, j)."""
    if rep1.K != rep2.K or any(rep1.dim(k) != rep2.dim(k) for k in range(rep1.K + 1)):
        return Report(False, "intertwiner", {"reason": "dimension mismatch"})
    D = [[diag(k, j) for j in range(rep1.dim(k))] for k in range(rep1.K + 1)]
    n = 0
    for k in range(rep1.K + 1):
        for key in rep1.generator_names(k) + ([("phi", k)] if k >= 1 else []):
            kt = Representation.target_level(key)
            if kt > rep1.K:
                continue
            A, B = rep1.generator(key), rep2.generator(key)
            lhs = A.conjugate_diag(D[kt], [RatFunc.coerce(1)] * A.ncols)
            rhs = B.conjugate_diag([RatFunc.coerce(1)] * B.nrows, D[k])
            diff = lhs.first_difference(rhs)
            n += 1
            if diff is not None:
                i, j, v = diff
                return Report(False, "intertwiner", {"generator": list(key), "row": _label(rep1, kt, i),
                                                     "col": _label(rep1, k, j), "residual": to_string(v)})
    return Report(True, "intertwiner", details={"generators_checked": n})
