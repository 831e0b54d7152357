import pytest
from hypothesis import given, settings, strategies as st

from dyckrep.acceptance import corrupt_d_minus, corrupt_joint_weight
from dyckrep.chains import enumerate_good_chains
from dyckrep.edge import closed_form_edge_function, recover_coboundary, synthesize_edge
from dyckrep.field import ONE, Q, T, param, rf_theta
from dyckrep.posets import (build_boolean, build_linear, build_partition_ideal, build_singleton,
                            ideal_quotient_map, identity_map, product, twist)
from dyckrep.rep import RepError, SparseMatrix, build_rep
from dyckrep.rep.duality import (IllTypedWord, check_word, dual_bijection, dual_rep, evaluate_word, normalize,
                                 theta_on_words)
from dyckrep.rep.hom import IncompatibleEdgeFunctions, check_hom_commutes, hom_from_posetmap, kernel_support
from dyckrep.rep.reconstruct import AssumptionViolated, check_reconstruction, reconstruct_poset
from dyckrep.rep.rescale import check_rescaled_form, rescale, unrescale
from dyckrep.rep.sparse import Subspace, nullspace
from dyckrep.rep.submodules import (NotACoideal, all_coideals, check_sandwich, matrix_closure,
                                    submodule_closure, submodule_from_coideal, u_span, v_span)
from dyckrep.rep.sym import check_sym_commute, sym_generators
from dyckrep.rep.tensor import count_by_enumeration, count_by_formula, tensor_dim_check
from dyckrep.rep.verify import FAMILIES, check_calibrated, diagonal_intertwines, verify_relations

a1, a2, a3 = param(1), param(2), param(3)


def honest(E, K=None):
    return build_rep(E, synthesize_edge(E), K)


POSETS = {
    "partitions3": lambda: build_partition_ideal(3),
    "partitions4": lambda: build_partition_ideal(4),
    "cols2": lambda: build_partition_ideal(5, max_cols=2),
    "linear4": lambda: build_linear(4),
    "boolean3": lambda: build_boolean([a1, a2, a3]),
    "lin_x_lin": lambda: product(build_linear(2), build_linear(2, a1)),
    "twisted": lambda: twist(build_partition_ideal(3), a2),
}


# sparse kernel

def test_sparse_basics():
    A = SparseMatrix(2, 2, {0: {0: ONE, 1: Q}, 1: {1: T}})
    assert (A @ SparseMatrix.identity(2)).first_difference(A) is None
    assert (A - A).is_zero()
    assert A.get(1, 0) == Q and A.transpose().get(0, 1) == Q
    assert A.apply({0: ONE}) == {0: ONE, 1: Q}
    N = SparseMatrix(1, 2, {0: {0: ONE}, 1: {0: -Q}})
    (v,) = nullspace(N)
    assert N.apply(v) == {}


def test_subspace():
    S = Subspace(3)
    assert S.add({0: ONE, 1: Q}) is not None
    assert S.add({0: 2 * ONE, 1: 2 * Q}) is None
    assert S.contains({0: T, 1: Q * T})
    assert not S.is_coordinate()


# construction

def test_singleton_rep():
    rep = honest(build_singleton())
    assert rep.K == 0 and rep.dim(0) == 1 and rep.dim(1) == 0
    assert rep.dplus(0).is_zero()
    assert verify_relations(rep).ok


def test_partition_ideal_2_dplus_values():
    E = build_partition_ideal(2)
    rep = build_rep(E, closed_form_edge_function(E))
    empty = rep.find(0, 0, ())
    assert rep.dplus(0).get(rep.find(1, 0, (ONE,)), empty) == -ONE
    # q c((1); q) (q - t)/(q - qt) with c((1); q) = -q(1 - t)/(q - t)
    assert rep.dplus(1).get(rep.find(2, 0, (ONE, Q)), rep.find(1, 0, (ONE,))) == -Q
    assert len(rep.dplus(1).column(rep.find(1, 0, (ONE,)))) == 1


def test_linear_dplus_coefficients():
    rep = honest(build_linear(4))
    for k in range(3):
        for i in range(0, 3 - k):
            j = rep.find(k, i, tuple(Q ** (i + s) for s in range(k)))
            r = rep.find(k + 1, i, tuple(Q ** (i + s) for s in range(k + 1)))
            assert rep.dplus(k).get(r, j) == (Q ** k - T) / (1 - T)


def test_truncated_levels_raise():
    rep = honest(build_partition_ideal(4), K=2)
    assert not rep.complete
    with pytest.raises(RepError):
        rep.dim(3)
    rr = verify_relations(rep)
    assert rr.ok and rr.skipped()


def test_hecke_eigenvalues_on_non_admissible_chains():
    rep = honest(build_partition_ideal(4))
    for k in range(2, rep.K + 1):
        for i in range(1, k):
            Ti = rep.T(k, i)
            for j, ch in enumerate(rep.bases[k]):
                if ch.w(i) == Q * ch.w(i + 1):
                    assert Ti.column(j) == {j: ONE}


@pytest.mark.parametrize("name", sorted(POSETS))
def test_all_relations_hold(name):
    rep = honest(POSETS[name]())
    rr = verify_relations(rep)
    assert rr.ok, rr.failures()[:2]
    assert not rr.skipped()
    assert set(rr.families()) >= set(FAMILIES)
    assert check_calibrated(rep).ok


def test_corrupted_edge_breaks_t1_dp2():
    E = build_partition_ideal(4)
    c = synthesize_edge(E)
    ci = next(i for i, cv in enumerate(E.covers) if E.label_str(cv.src) == "(1)")
    rr = verify_relations(build_rep(E, c.with_value(ci, c.values[ci] * Q)))
    assert rr.by_family()["T1_dp2"] == "fail"


def test_thread_count_does_not_change_results():
    rep = honest(build_partition_ideal(4))
    assert verify_relations(rep, threads=1).to_json() == verify_relations(rep, threads=4).to_json()


def test_gauge_change_is_diagonal_intertwiner():
    E = build_partition_ideal(4)
    c0, c1 = synthesize_edge(E, 0), closed_form_edge_function(E)
    a = recover_coboundary(E, c1, c0)
    r0, r1 = build_rep(E, c0), build_rep(E, c1)
    assert diagonal_intertwines(r0, r1, lambda k, j: a[r0.bases[k][j].endpoint].inverse()).ok
    assert not diagonal_intertwines(r0, r1, lambda k, j: ONE).ok


# rescaling

@pytest.mark.parametrize("name", ["partitions3", "boolean3", "linear4"])
def test_rescaled_basis(name):
    rep = honest(POSETS[name]())
    res = rescale(rep)
    assert check_rescaled_form(res).ok
    assert verify_relations(res).ok
    back = unrescale(res)
    for k in range(rep.K + 1):
        for key in rep.generator_names(k):
            assert back.generator(key).first_difference(rep.generator(key)) is None


# submodules

def test_coideal_submodules():
    rep = honest(build_partition_ideal(3))
    E = rep.poset
    whole = set(range(len(E)))
    V, U = submodule_from_coideal(rep, whole)
    assert all(len(V[k]) == rep.dim(k) == len(U[k]) for k in V)
    with pytest.raises(NotACoideal):
        submodule_from_coideal(rep, {0})
    assert len(all_coideals(rep)) == 15


def test_maximal_coideal_kills_dplus():
    rep = honest(build_partition_ideal(3))
    tops = {i for i in range(len(rep.poset)) if not rep.poset.up[i]}
    U = u_span(rep, tops)
    for k in range(rep.K):
        for j in U[k]:
            assert not rep.dplus(k).column(j)


def test_level_zero_seed_gives_coideal_span():
    rep = honest(build_partition_ideal(3))
    E = rep.poset
    lam = E.add(0, ONE)
    W = submodule_closure(rep, [(0, rep.find(0, lam, ()))])
    above = {i for i in range(len(E)) if i != 0}
    assert W == v_span(rep, above)


@settings(max_examples=20)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 100)), min_size=1, max_size=3))
def test_closure_matches_matrix_closure(seeds):
    rep = honest(build_partition_ideal(3))
    picks = [(k, j % rep.dim(k)) for k, j in seeds if rep.dim(k)]
    comb = submodule_closure(rep, picks)
    mat, coordinate = matrix_closure(rep, picks)
    assert coordinate and comb == mat
    assert check_sandwich(rep, comb).ok


# homomorphisms

def test_identity_hom():
    rep = honest(build_partition_ideal(3))
    mats = hom_from_posetmap(rep, rep, identity_map(rep.poset))
    for k, M in enumerate(mats):
        assert M.first_difference(SparseMatrix.identity(rep.dim(k))) is None


def test_quotient_hom_kernel():
    E, I = build_partition_ideal(3), build_partition_ideal(2)
    r1, r2 = build_rep(E, closed_form_edge_function(E)), build_rep(I, closed_form_edge_function(I))
    F = ideal_quotient_map(E, I)
    mats = hom_from_posetmap(r1, r2, F)
    assert check_hom_commutes(r1, r2, mats).ok
    ker, coordinate = kernel_support(mats)
    assert coordinate
    assert ker == u_span(r1, [i for i in range(len(E)) if F(i) is None])


def test_incompatible_edges_rejected():
    E, I = build_partition_ideal(3), build_partition_ideal(2)
    r1 = build_rep(E, closed_form_edge_function(E))
    c = closed_form_edge_function(I)
    r2 = build_rep(I, c.with_value(0, c.values[0] * 2))
    with pytest.raises(IncompatibleEdgeFunctions):
        hom_from_posetmap(r1, r2, ideal_quotient_map(E, I))


# duality

def test_theta_on_letters():
    assert theta_on_words((("T", 3, 1),)) == {(("Tinv", 3, 2),): ONE}
    assert theta_on_words((("z", 3, 1),)) == {(("z", 3, 3),): ONE}
    with pytest.raises(IllTypedWord):
        check_word((("dp", 0), ("dp", 0)))


letters = st.one_of(
    st.tuples(st.just("z"), st.just(3), st.integers(1, 3)),
    st.tuples(st.sampled_from(["T", "Tinv"]), st.just(3), st.integers(1, 2)),
    st.tuples(st.just("Delta"), st.just(3), st.integers(1, 2)),
)


@given(st.lists(letters, min_size=1, max_size=4), st.integers(-2, 2))
def test_theta_is_an_involution_on_words(word, e):
    comb = {tuple(word): Q ** e * (1 - T) if e >= 0 else (1 - T) / Q ** (-e)}
    assert theta_on_words(theta_on_words(comb)) == normalize(comb)


def test_theta_twice_on_dplus():
    w = (("dp", 1),)
    assert theta_on_words(theta_on_words(w)) == normalize({w: ONE})


@pytest.mark.parametrize("name", ["linear4", "partitions3", "boolean3"])
def test_dual_representation(name):
    rep = honest(POSETS[name]())
    res = dual_rep(rep)
    assert verify_relations(res.dual_rep).ok
    assert verify_relations(res.dual_module).ok
    assert res.theta_check.ok
    assert res.check.ok


def test_dual_bijection_is_a_bijection():
    rep = honest(build_partition_ideal(3))
    res = dual_rep(rep)
    for k in range(rep.K + 1):
        image = {dual_bijection(rep, res.dual_rep, k, j) for j in range(rep.dim(k))}
        assert image == set(range(rep.dim(k)))


def test_level_scalars_alone_fail_on_dminus():
    # without the grade factor every d_- entry is off by q
    rep = honest(build_linear(4))
    res = dual_rep(rep)
    assert not res.literal_check.ok
    assert res.literal_check.witness["generator"][0] == "dm"
    assert res.literal_check.witness["residual"] in ("-q + 1", "1 - q", "q - 1", "-1 + q")


def test_level_scalars_suffice_without_covers():
    rep = honest(build_singleton([a1]))
    assert dual_rep(rep).literal_check.ok


def test_dual_module_is_theta_transpose():
    rep = honest(build_partition_ideal(3))
    res = dual_rep(rep)
    word = {(("dm", 2), ("T", 2, 1), ("dp", 1)): ONE}
    lhs = evaluate_word(res.dual_module, word)
    rhs = evaluate_word(rep, theta_on_words(word)).transpose().map_entries(rf_theta)
    assert lhs.first_difference(rhs) is None


# Sym

@pytest.mark.parametrize("name", ["partitions4", "linear4"])
def test_sym_operators_commute(name):
    rep = honest(POSETS[name]())
    rpt = check_sym_commute(rep, 3)
    assert rpt.ok and all(rpt.details["nonzero"])


def test_sym_on_singleton_is_zero():
    gens = sym_generators(honest(build_singleton()), 2)
    assert all(g.is_zero() for g in gens)


# tensor products

def test_tensor_counts():
    E1, E2 = build_linear(2), build_linear(2, a1)
    P = product(E1, E2)
    assert [count_by_enumeration(P, k) for k in range(4)] == [4, 4, 2, 0]
    assert [count_by_formula(E1, E2, k) for k in range(4)] == [4, 4, 2, 0]
    S = build_singleton()
    E = build_partition_ideal(3)
    assert [count_by_formula(E, S, k) for k in range(4)] == [len(enumerate_good_chains(E, k)) for k in range(4)]


def test_tensor_dim_check_twisted_partitions():
    E1, E2 = twist(build_partition_ideal(2), a1), twist(build_partition_ideal(2), a2)
    rpt = tensor_dim_check(E1, E2, 3)
    assert rpt.ok
    assert [r["product"] for r in rpt.details["rows"]] == [16, 24, 26, 18]


# reconstruction

@pytest.mark.parametrize("name", ["linear4", "boolean3", "partitions3", "twisted"])
def test_reconstruction_round_trip(name):
    assert check_reconstruction(honest(POSETS[name]())).ok


def test_reconstruction_detects_missing_dminus():
    with pytest.raises(AssumptionViolated) as exc:
        reconstruct_poset(corrupt_d_minus(honest(build_partition_ideal(3))))
    assert exc.value.which == "d_minus"


def test_reconstruction_detects_repeated_weights():
    with pytest.raises(AssumptionViolated) as exc:
        reconstruct_poset(corrupt_joint_weight(honest(build_partition_ideal(3))))
    assert exc.value.which == "simple_spectrum"
