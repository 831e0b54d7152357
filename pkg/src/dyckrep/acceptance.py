"""The thirteen acceptance checks, each returning a Report with exact results."""

from __future__ import annotations

import random
import time
from typing import Callable

from .chains import enumerate_good_chains, longest_good_chain
from .edge import (EdgeFunction, boolean_edge_function, closed_form_edge_function, gieseker_base,
                   product_edge, recover_coboundary, synthesize_edge, verify_monodromy)
from .field import Q, T, param, to_string
from .posets import (WeightedPoset, build_boolean, build_linear, build_partition_ideal, ideal_quotient_map,
                     product, twist)
from .report import Report
from .rep.build import Representation, build_rep
from .rep.duality import dual_rep
from .rep.hom import check_hom_commutes, hom_from_posetmap, kernel_support
from .rep.reconstruct import AssumptionViolated, check_reconstruction, reconstruct_poset
from .rep.sparse import SparseMatrix
from .rep.submodules import (all_coideals, check_sandwich, is_generator_closed, matrix_closure,
                             submodule_closure, u_span, v_span)
from .rep.sym import check_sym_commute
from .rep.tensor import tensor_dim_check
from .rep.verify import check_calibrated, diagonal_intertwines, verify_relations


def relation_suite_posets() -> list[WeightedPoset]:
    a1, a2, a3 = param(1), param(2), param(3)
    return [
        build_partition_ideal(4),
        build_partition_ideal(6, max_cols=2),
        build_linear(4, 1),
        build_boolean([a1, a2, a3]),
        product(build_linear(2, 1), build_linear(2, a1)),
        product(twist(build_partition_ideal(2), a1), twist(build_partition_ideal(2), a2)),
    ]


def product_instances() -> list[tuple[WeightedPoset, WeightedPoset]]:
    a1, a2 = param(1), param(2)
    return [(build_linear(2, 1), build_linear(2, a1)),
            (twist(build_partition_ideal(2), a1), twist(build_partition_ideal(2), a2))]


def _honest_rep(E: WeightedPoset, c: EdgeFunction | None = None) -> Representation:
    return build_rep(E, c if c is not None else synthesize_edge(E))


def criterion_1() -> Report:
    start = time.perf_counter()
    rows = []
    for E in relation_suite_posets():
        rep = _honest_rep(E)
        rr = verify_relations(rep)
        rows.append({"poset": E.name, "K": rep.K, "ok": rr.ok, "skipped": len(rr.skipped()),
                     "families": len(rr.families())})
        if not rr.ok or rr.skipped():
            return Report(False, "relation_suite", {"poset": E.name, "failures": rr.failures()[:3],
                                                    "skipped": rr.skipped()[:3]}, {"rows": rows})
    return Report(True, "relation_suite", details={"rows": rows, "seconds": round(time.perf_counter() - start, 2)})


def criterion_2() -> Report:
    for E in relation_suite_posets():
        rpt = check_calibrated(_honest_rep(E))
        if not rpt.ok:
            return Report(False, "calibrated", {"poset": E.name, **(rpt.witness or {})})
    return Report(True, "calibrated", details={"posets": len(relation_suite_posets())})


def _gauge_intertwiner(E: WeightedPoset, c_from: EdgeFunction, c_to: EdgeFunction) -> Report:
    """c_to = c_from a(src)/a(dst) gives V(E, c_from) -> V(E, c_to), [lambda; w] -> [lambda; w]/a(endpoint)."""
    a = recover_coboundary(E, c_to, c_from)
    if a is None:
        return Report(False, "gauge", {"reason": "ratio is not a coboundary"})
    r_from, r_to = build_rep(E, c_from), build_rep(E, c_to)
    rpt = diagonal_intertwines(r_from, r_to, lambda k, j: a[r_from.bases[k][j].endpoint].inverse())
    return Report(rpt.ok, "gauge", rpt.witness, {"coboundary": [to_string(x) for x in a], **rpt.details})


def criterion_3() -> Report:
    E = build_partition_ideal(4)
    c0 = synthesize_edge(E, 0)
    for seed in range(1, 50):
        c1 = synthesize_edge(E, seed)
        if c1.values != c0.values:
            break
    else:
        return Report(False, "edge_uniqueness", {"reason": "no second spanning tree found"})
    rpt = _gauge_intertwiner(E, c0, c1)
    return Report(rpt.ok, "edge_uniqueness", rpt.witness, {"seeds": [0, seed], **rpt.details})


def criterion_4() -> Report:
    E = build_partition_ideal(4)
    closed = closed_form_edge_function(E)
    a1, a2, a3 = param(1), param(2), param(3)
    B = build_boolean([a1, a2, a3])
    bclosed = boolean_edge_function(B, [a1, a2, a3])
    out = {}
    for name, P, c in (("partition", E, closed), ("boolean", B, bclosed)):
        mono = verify_monodromy(P, c)
        if not mono.ok:
            return Report(False, "closed_forms", {"family": name, **mono.witness})
        g = _gauge_intertwiner(P, c, synthesize_edge(P))
        if not g.ok:
            return Report(False, "closed_forms", {"family": name, **(g.witness or {})})
        out[name] = {"squares": mono.details["squares_checked"]}
    return Report(True, "closed_forms", details=out)


def criterion_5() -> Report:
    n = 4
    E = build_linear(n, 1)
    c = synthesize_edge(E)
    rep = build_rep(E, c)
    checked = 0
    for k in range(0, n):
        for i in range(0, n - k):
            j = rep.find(k, i, tuple(Q ** (i + s) for s in range(k)))
            if i + k + 1 > n - 1:
                continue
            ck = c(i + k, Q ** (i + k))
            target = rep.find(k + 1, i, tuple(Q ** (i + s) for s in range(k + 1)))
            got = rep.dplus(k).get(target, j)
            want = (Q ** k - T) / (1 - T) * ck
            if got != want:
                return Report(False, "linear_formulas", {"operator": "d+", "i": i, "k": k,
                                                         "got": to_string(got), "want": to_string(want)})
            checked += 1
            if k >= 1:
                comm = rep.dplus(k - 1) @ rep.dminus(k) - rep.dminus(k + 1) @ rep.dplus(k)
                r = rep.find(k, i + 1, tuple(Q ** (i + 1 + s) for s in range(k)))
                got = comm.get(r, j)
                want = ck * Q ** (k - 1) * (1 - Q) / (1 - T)
                if got != want or len(comm.column(j)) != 1:
                    return Report(False, "linear_formulas", {"operator": "commutator", "i": i, "k": k,
                                                             "got": to_string(got), "want": to_string(want)})
                checked += 1
    return Report(True, "linear_formulas", details={"coefficients_checked": checked})


def criterion_6() -> Report:
    E = build_partition_ideal(6, max_cols=2)
    nonzero = [k for k in range(0, 8) if enumerate_good_chains(E, k)]
    ok = nonzero == [0, 1, 2]
    return Report(ok, "restricted_partitions", None if ok else {"nonzero_levels": nonzero},
                  {"nonzero_levels": nonzero, "longest": longest_good_chain(E)})


def criterion_7() -> Report:
    rows = []
    for E1, E2 in product_instances():
        rpt = tensor_dim_check(E1, E2, 3)
        rows.append(rpt.details["rows"])
        if not rpt.ok:
            return Report(False, "tensor_dim", rpt.witness, {"rows": rows})
    return Report(True, "tensor_dim", details={"rows": rows})


def gieseker_pair():
    a1, a2 = param(1), param(2)
    E1, E2 = twist(build_partition_ideal(2), a1), twist(build_partition_ideal(2), a2)
    c1, c2 = closed_form_edge_function(E1, (a1,)), closed_form_edge_function(E2, (a2,))
    P = product(E1, E2)
    c = product_edge(E1, c1, E2, c2,
                     base1={r: gieseker_base(a1) for r in E1.minimal_elements()},
                     base2={r: gieseker_base(a2) for r in E2.minimal_elements()}, P=P)
    return P, c, closed_form_edge_function(P, (a1, a2))


def criterion_8() -> Report:
    P, c, closed = gieseker_pair()
    for name, f in (("product", c), ("closed_form", closed)):
        mono = verify_monodromy(P, f)
        if not mono.ok:
            return Report(False, "gieseker", {"edge": name, **mono.witness})
    g = _gauge_intertwiner(P, c, closed)
    if not g.ok:
        return Report(False, "gieseker", g.witness)
    rr = verify_relations(build_rep(P, c))
    if not rr.ok or rr.skipped():
        return Report(False, "gieseker", {"failures": rr.failures()[:3]})
    return Report(True, "gieseker", details={"identical_values": c.values == closed.values,
                                             "covers": len(P.covers)})


def criterion_9() -> Report:
    rows = []
    ok = True
    witness = None
    for E in (build_linear(4, 1), build_partition_ideal(3)):
        res = dual_rep(_honest_rep(E))
        rel_dual = verify_relations(res.dual_rep)
        rel_star = verify_relations(res.dual_module)
        row = {"poset": E.name, "dual_relations": rel_dual.ok and not rel_dual.skipped(),
               "dual_module_relations": rel_star.ok, "theta_transpose": res.theta_check.ok,
               "bijection_intertwiner": res.literal_check.ok,
               "grade_corrected_intertwiner": res.check.ok}
        rows.append(row)
        if not all(v for key, v in row.items() if key != "poset"):
            ok = False
            if witness is None:
                witness = {"poset": E.name, "literal": res.literal_check.witness}
    return Report(ok, "duality", witness, {"rows": rows})


def criterion_10(seeds: int = 10) -> Report:
    E = build_partition_ideal(3)
    rep = _honest_rep(E)
    cs = all_coideals(rep)
    for I in cs:
        for S in (v_span(rep, I), u_span(rep, I)):
            rpt = is_generator_closed(rep, S)
            if not rpt.ok:
                return Report(False, "submodules", {"coideal": sorted(I), **rpt.witness})
    for s in range(seeds):
        rng = random.Random(s)
        picks = []
        for _ in range(rng.randint(1, 2)):
            k = rng.randrange(rep.K + 1)
            picks.append((k, rng.randrange(rep.dim(k))))
        comb = submodule_closure(rep, picks)
        mat, coordinate = matrix_closure(rep, picks)
        if comb != mat or not coordinate:
            return Report(False, "submodules", {"seed": s, "picks": picks, "coordinate": coordinate})
        sw = check_sandwich(rep, comb)
        if not sw.ok:
            return Report(False, "submodules", {"seed": s, **sw.witness})
    return Report(True, "submodules", details={"coideals": len(cs), "seeds": seeds})


def criterion_11() -> Report:
    E, I = build_partition_ideal(3), build_partition_ideal(2)
    r1 = build_rep(E, closed_form_edge_function(E))
    r2 = build_rep(I, closed_form_edge_function(I))
    F = ideal_quotient_map(E, I)
    mats = hom_from_posetmap(r1, r2, F, check=False)
    comm = check_hom_commutes(r1, r2, mats)
    if not comm.ok:
        return Report(False, "hom", comm.witness)
    ker, coordinate = kernel_support(mats)
    U = u_span(r1, [lam for lam in range(len(E)) if F(lam) is None])
    if not coordinate or any(ker[k] != U[k] for k in U):
        return Report(False, "hom", {"kernel": {k: sorted(v) for k, v in ker.items()},
                                     "U": {k: sorted(v) for k, v in U.items()}})
    return Report(True, "hom", details={"kernel_dims": [len(ker[k]) for k in sorted(ker)], **comm.details})


def criterion_12() -> Report:
    for E in (build_partition_ideal(4), build_linear(4, 1)):
        rpt = check_sym_commute(_honest_rep(E), 3)
        if not rpt.ok:
            return Report(False, "sym", {"poset": E.name, **rpt.witness})
    return Report(True, "sym")


def corrupt_d_minus(rep: Representation, k: int = 1, j: int = 0) -> Representation:
    rep.materialize()
    dm = rep.dminus(k)
    cols = {c: dict(v) for c, v in dm.cols.items() if c != j}
    rep.overrides[("dm", k)] = SparseMatrix(dm.nrows, dm.ncols, cols)
    return rep


def corrupt_joint_weight(rep: Representation, k: int = 1, i: int = 0, j: int = 1) -> Representation:
    """Give vector j the z-eigenvalues and Delta data of vector i."""
    rep.materialize()
    recs = [rep.record(k, s) for s in range(rep.dim(k))]
    recs[j] = recs[i]
    rep.records_override[k] = recs
    for s in range(1, k + 1):
        z = rep.z(k, s)
        vals = [z.get(r, r) for r in range(z.nrows)]
        vals[j] = vals[i]
        rep.overrides[("z", k, s)] = SparseMatrix.diag(vals)
    return rep


def criterion_13() -> Report:
    a1, a2, a3 = param(1), param(2), param(3)
    for E in (build_linear(4, 1), build_boolean([a1, a2, a3]), build_partition_ideal(3)):
        rpt = check_reconstruction(_honest_rep(E))
        if not rpt.ok:
            return Report(False, "reconstruction", {"poset": E.name, **rpt.witness})
    E = build_partition_ideal(3)
    expected = {"d_minus": corrupt_d_minus, "simple_spectrum": corrupt_joint_weight}
    for which, corrupt in expected.items():
        try:
            reconstruct_poset(corrupt(_honest_rep(E)))
        except AssumptionViolated as exc:
            if exc.which != which:
                return Report(False, "reconstruction", {"corruption": which, "raised": exc.which})
        else:
            return Report(False, "reconstruction", {"corruption": which, "raised": None})
    return Report(True, "reconstruction")


CRITERIA: dict[int, tuple[str, Callable[[], Report]]] = {
    1: ("relation suite", criterion_1),
    2: ("calibration", criterion_2),
    3: ("edge-function uniqueness", criterion_3),
    4: ("closed forms vs synthesis", criterion_4),
    5: ("linear-poset formulas", criterion_5),
    6: ("restricted partitions", criterion_6),
    7: ("tensor dimension identity", criterion_7),
    8: ("Gieseker as tensor power", criterion_8),
    9: ("duality", criterion_9),
    10: ("submodules", criterion_10),
    11: ("homomorphisms", criterion_11),
    12: ("Sym commutativity", criterion_12),
    13: ("reconstruction round trip", criterion_13),
}
