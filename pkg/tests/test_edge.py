import pytest
from hypothesis import given, strategies as st

from dyckrep.edge import (EdgeError, EdgeFunction, NotAddable, PoleAtInput, boolean_edge, boolean_edge_function,
                          check_psi_pair, closed_form_edge_function, dual_edge, gieseker_base, m_psi_table,
                          partition_edge, product_edge, psi_std, recover_coboundary, synthesize_edge, upsilon,
                          verify_monodromy)
from dyckrep.field import ONE, Q, T, param, parse
from dyckrep.posets import build_boolean, build_linear, build_partition_ideal, build_singleton, dual, product, twist

a1, a2, a3 = param(1), param(2), param(3)
x, y, u = param(4), param(5), param(6)


def test_upsilon_displayed_form():
    want = parse("-(a4 - t*a5)*(a4 - q*a5)*(a5 - q*t*a4) / ((a5 - t*a4)*(a5 - q*a4)*(a4 - q*t*a5))")
    assert upsilon(x, y) == want
    assert upsilon(x, y) * upsilon(y, x) == ONE
    with pytest.raises(PoleAtInput):
        upsilon(x, T * x)


def test_psi():
    assert psi_std(y, y) == 0
    assert psi_std(x, y) / psi_std(y, x) == upsilon(x, y)
    assert check_psi_pair(psi_std, psi_std)
    assert not check_psi_pair(psi_std, lambda a, b: ONE)


def test_partition_edge_values():
    assert partition_edge((), ONE) == -ONE
    # character t - t/q at x = q, so Lambda = (1 - t)/(1 - t/q)
    assert partition_edge((1,), Q) == -Q * (1 - T) / (Q - T)
    assert partition_edge((1,), T) == -T * (1 - Q) / (T - Q)
    with pytest.raises(NotAddable):
        partition_edge((1,), ONE)


@pytest.mark.parametrize("E", [build_linear(4), build_partition_ideal(3), build_partition_ideal(5),
                               build_boolean([a1, a2, a3]), product(build_linear(2), build_linear(2, a1))],
                         ids=lambda E: E.name)
def test_synthesized_edge_satisfies_monodromy(E):
    for seed in range(3):
        assert verify_monodromy(E, synthesize_edge(E, seed)).ok


def test_linear_edge_is_trivial():
    E = build_linear(5)
    assert set(synthesize_edge(E).values) == {ONE}


def test_closed_forms_satisfy_monodromy():
    assert verify_monodromy(build_partition_ideal(4), closed_form_edge_function(build_partition_ideal(4))).ok
    B = build_boolean([a1, a2, a3])
    assert verify_monodromy(B, boolean_edge_function(B, [a1, a2, a3])).ok


def test_boolean_edge_values():
    ws = [a1, a2, a3]
    assert boolean_edge((), 1, ws) == ONE
    assert boolean_edge((1,), 2, ws) == psi_std(a1, a2)
    with pytest.raises(NotAddable):
        boolean_edge((1,), 1, ws)


def test_corrupted_edge_reports_square():
    E = build_partition_ideal(3)
    c = synthesize_edge(E)
    # the only square sits on (1) -> (2), (1,1) -> (2,1)
    ci = next(i for i, cv in enumerate(E.covers) if E.label_str(cv.src) == "(1)")
    rpt = verify_monodromy(E, c.with_value(ci, c.values[ci] * Q))
    assert not rpt.ok and rpt.witness["base"] == "(1)"
    # the cover out of the empty partition lies on no square
    ci = next(i for i, cv in enumerate(E.covers) if E.label_str(cv.src) == "()")
    assert verify_monodromy(E, c.with_value(ci, c.values[ci] * Q)).ok


def test_two_seeds_differ_by_coboundary():
    E = build_partition_ideal(4)
    c0 = synthesize_edge(E, 0)
    c1 = next(synthesize_edge(E, s) for s in range(1, 50) if synthesize_edge(E, s).values != c0.values)
    a = recover_coboundary(E, c1, c0)
    assert a is not None
    for ci, cv in enumerate(E.covers):
        assert c1.values[ci] == c0.values[ci] * a[cv.src] / a[cv.dst]


def test_non_coboundary_detected():
    E = build_partition_ideal(3)
    c = synthesize_edge(E)
    ci = next(i for i, cv in enumerate(E.covers) if E.label_str(cv.src) == "(1)")
    assert recover_coboundary(E, c.with_value(ci, c.values[ci] * 2), c) is None


def test_edge_function_rejects_zero():
    E = build_linear(2)
    with pytest.raises(EdgeError):
        EdgeFunction(E, [0 * ONE])
    with pytest.raises(EdgeError):
        EdgeFunction(E, [])


def test_m_psi_on_partitions():
    E = build_partition_ideal(3)
    table = m_psi_table(E, psi_std, u, {0: gieseker_base(ONE)})
    for lam in range(len(E)):
        want = 1 / (1 - 1 / u)
        for b, m in E.contents[lam]:
            want = want * ((1 - b / u) * (1 - Q * T * b / u) / ((1 - Q * b / u) * (1 - T * b / u))) ** m
        assert table[lam] == want


def test_product_unit_law():
    E1 = build_partition_ideal(3)
    c1 = closed_form_edge_function(E1)
    S = build_singleton()
    c = product_edge(E1, c1, S, EdgeFunction(S, []))
    assert c.values == c1.values


def test_product_of_linear_posets():
    E1, E2 = build_linear(2), build_linear(2, a1)
    c = product_edge(E1, synthesize_edge(E1), E2, synthesize_edge(E2))
    assert len(c.values) == 4
    assert verify_monodromy(c.poset, c).ok


def test_gieseker_product_equals_closed_form():
    E1, E2 = twist(build_partition_ideal(2), a1), twist(build_partition_ideal(2), a2)
    P = product(E1, E2)
    c = product_edge(E1, closed_form_edge_function(E1, (a1,)), E2, closed_form_edge_function(E2, (a2,)),
                     base1={0: gieseker_base(a1)}, base2={0: gieseker_base(a2)}, P=P)
    assert c.values == closed_form_edge_function(P, (a1, a2)).values


def test_dual_edge_satisfies_monodromy():
    for E in (build_partition_ideal(4), build_boolean([a1, a2, a3])):
        D = dual(E)
        assert verify_monodromy(D, dual_edge(E, synthesize_edge(E), D)).ok


@given(st.integers(0, 20))
def test_any_seed_is_gauge_equivalent(seed):
    E = build_partition_ideal(4)
    assert recover_coboundary(E, synthesize_edge(E, seed), closed_form_edge_function(E)) is not None
