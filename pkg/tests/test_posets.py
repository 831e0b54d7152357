import json

import pytest
from hypothesis import given, strategies as st

from dyckrep.field import ONE, Q, T, param, rf_theta
from dyckrep.posets import (InvalidPoset, NotInGeneralPosition, PosetMap, WeightedPoset, addable_weights,
                            build_boolean, build_linear, build_partition_ideal, build_singleton,
                            check_excellent, check_general_position, dual, ideal_quotient_map, identity_map,
                            isomorphic, partitions_up_to, product, twist)

a1, a2 = param(1), param(2)


def weights_of(E):
    return sorted(str(cv.weight) for cv in E.covers)


def test_partition_ideal_small():
    E = build_partition_ideal(0)
    assert len(E) == 1 and E.contents[0] == frozenset()
    E = build_partition_ideal(2)
    assert [E.label_str(i) for i in range(len(E))] == ["()", "(1)", "(2)", "(1,1)"]
    got = {(E.label_str(cv.src), E.label_str(cv.dst), cv.weight) for cv in E.covers}
    assert got == {("()", "(1)", ONE), ("(1)", "(2)", Q), ("(1)", "(1,1)", T)}


def test_max_cols_excludes_long_rows():
    E = build_partition_ideal(3, max_cols=2)
    labels = {E.label_str(i) for i in range(len(E))}
    assert "(3)" not in labels and "(2,1)" in labels
    assert check_excellent(E).ok


def test_partition_count_matches_oracle():
    # number of partitions of 0..6 is 1, 1, 2, 3, 5, 7, 11
    assert len(partitions_up_to(6)) == 30
    assert len(build_partition_ideal(6)) == 30


def test_addable_weights():
    E = build_partition_ideal(3)
    empty = E.element_with_content({})
    assert [(x, E.label_str(m)) for x, m in addable_weights(E, empty)] == [(ONE, "(1)")]
    one = E.add(empty, ONE)
    assert {(x, E.label_str(m)) for x, m in addable_weights(E, one)} == {(Q, "(2)"), (T, "(1,1)")}
    top = [i for i in range(len(E)) if not E.up[i]]
    assert top and all(addable_weights(E, i) == [] for i in top)


def test_linear():
    assert len(build_linear(1)) == 1 and not build_linear(1).covers
    assert weights_of(build_linear(3)) == sorted(map(str, [ONE, Q]))
    E = build_linear(4, a1)
    assert weights_of(E) == sorted(map(str, [a1, Q * a1, Q * Q * a1]))
    assert check_excellent(E).ok
    assert check_excellent(build_linear(5)).ok


def test_boolean():
    assert len(build_boolean([])) == 1
    E = build_boolean([a1, a2])
    assert len(E) == 4 and check_excellent(E).ok
    rpt = check_excellent(build_boolean([a1, Q * a1]))
    assert not rpt.ok and rpt.witness
    assert not check_excellent(build_boolean([a1, T * a1])).ok


def test_singleton_contents():
    E = build_singleton([a1, Q * a1])
    assert len(E) == 1
    assert dict(E.contents[0]) == {a1: 1, Q * a1: 1}


def test_twist():
    E = build_linear(3)
    assert twist(E, ONE).contents == E.contents
    assert weights_of(twist(E, a1)) == sorted(map(str, [a1, Q * a1]))
    assert isomorphic(twist(twist(E, a1), 1 / a1), E).ok
    with pytest.raises(Exception):
        twist(E, 0 * a1)


def test_product():
    P = product(build_linear(2), build_linear(2, a1))
    assert len(P) == 4 and len(P.covers) == 4
    assert isomorphic(product(build_singleton(), build_partition_ideal(2)), build_partition_ideal(2)).ok
    with pytest.raises(NotInGeneralPosition):
        product(build_partition_ideal(2), build_partition_ideal(2))


def test_general_position():
    assert check_general_position(build_linear(2), build_linear(2, a1)).ok
    rpt = check_general_position(build_linear(2), build_linear(2))
    assert not rpt.ok
    assert check_general_position(build_partition_ideal(2), twist(build_partition_ideal(2), a1)).ok


def test_dual():
    assert len(dual(build_singleton())) == 1
    E = build_linear(3, a1)
    D = dual(E)
    assert weights_of(D) == sorted(map(str, [rf_theta(a1), rf_theta(Q * a1)]))
    # covers are reversed
    assert {(cv.dst, cv.src) for cv in D.covers} == {(cv.src, cv.dst) for cv in E.covers}
    for F in (E, build_partition_ideal(3), build_boolean([a1, a2])):
        assert isomorphic(dual(dual(F)), F).ok


def test_json_round_trip():
    E = twist(build_partition_ideal(3), a1)
    F = WeightedPoset.from_json(json.loads(E.dumps()))
    assert isomorphic(E, F).ok
    assert F.dumps() == E.dumps()


def test_invalid_poset_rejected():
    with pytest.raises(InvalidPoset):
        # the cover weight disagrees with the content difference
        WeightedPoset(["x", "y"], [{}, {Q: 1}], [0, 1], [(0, 1, T)])


def test_poset_maps():
    E, I = build_partition_ideal(3), build_partition_ideal(2)
    assert identity_map(E).check().ok
    assert ideal_quotient_map(E, I).check().ok
    # sending (1) and (2) to the same element breaks weight preservation
    lab = {E.label_str(i): i for i in range(len(E))}
    mapping = {i: i for i in range(len(E))}
    mapping[lab["(2)"]] = lab["(1,1)"]
    rpt = PosetMap(E, E, mapping).check()
    assert not rpt.ok and "condition" in rpt.witness


@given(st.integers(0, 5), st.sampled_from([None, 1, 2, 3]))
def test_partition_ideals_are_excellent(n, cols):
    E = build_partition_ideal(n, max_cols=cols)
    assert check_excellent(E).ok
    for cv in E.covers:
        assert E.grades[cv.dst] == E.grades[cv.src] + 1
