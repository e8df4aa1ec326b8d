import itertools

import pytest
from hypothesis import given, settings

from bottkit.core import MINUS, PLUS, BottMatrix, CurveClass, RayId, read_matrix, solve_exact
from bottkit.fan import cone_matrix, enumerate_walls, maximal_cones, ray_coords, wall_classes, wall_curve_class
from bottkit.relations import (
    all_relations,
    check_relation,
    coordinates_in_relation_basis,
    format_relation_table,
    mori_generators,
    primitive_relation,
    reduction_trace,
    relation_cones,
    relation_wall,
)
from conftest import FIXTURES, bott_matrices


def R(s):
    return RayId.parse(s)


# Worked example on the 7-stage tower (fixture m7.mat).
M7_RELATIONS = {
    1: [("2+", 1), ("3+", 1), ("4+", 1), ("5-", 2), ("6-", 1), ("7+", 1)],
    2: [("4-", 2), ("5-", 1), ("6+", 1), ("7+", 1)],
    3: [("5+", 1), ("7+", 1)],
    4: [("5+", 1), ("6-", 2), ("7-", 1)],
    5: [("6+", 1), ("7-", 2)],
    6: [("7+", 1)],
    7: [],
}


def test_m7_relations_exact(m7):
    for rel in all_relations(m7):
        assert [(str(ray), c) for ray, c in rel.gamma] == M7_RELATIONS[rel.i]


def test_m7_pivots_and_a_table(m7):
    trace, _ = reduction_trace(m7, 1)
    assert trace.pivots == (1, 5, 6)
    assert trace.a_table[(2, 6)] == -1
    assert trace.a_table[(2, 7)] == 2
    assert trace.a_table[(3, 7)] == 1
    assert str(primitive_relation(m7, 1)) == \
        "e_1^+ + e_1^- = e_2^+ + e_3^+ + e_4^+ + 2 e_5^- + e_6^- + e_7^+"
    assert str(primitive_relation(m7, 7)) == "e_7^+ + e_7^- = 0"


def test_m7_relation_cones(m7):
    first, second = relation_cones(m7, 1)
    assert [str(x) for x in first] == ["1+", "2+", "3+", "4+", "5-", "6-", "7+"]
    assert [str(x) for x in second] == ["1-", "2+", "3+", "4+", "5-", "6-", "7+"]
    w = relation_wall(m7, 1)
    assert sorted(w.shared_rays()) == sorted(first[1:])


def test_m7_variant_differs_only_in_row_three():
    variant = read_matrix(FIXTURES / "m7_variant.mat")
    rels = {rel.i: [(str(ray), c) for ray, c in rel.gamma] for rel in all_relations(variant)}
    assert rels[3] == [("5+", 1), ("6+", 1), ("7+", 1)]
    for i in (1, 2, 4, 5, 6, 7):
        assert rels[i] == M7_RELATIONS[i]


def test_identity_and_hirzebruch():
    assert all(rel.gamma == () for rel in all_relations(BottMatrix.identity(4)))
    rels = all_relations(BottMatrix.hirzebruch(2))
    assert [(str(r), c) for r, c in rels[0].gamma] == [("2+", 2)]
    rels = all_relations(BottMatrix.hirzebruch(-2))
    assert [(str(r), c) for r, c in rels[0].gamma] == [("2-", 2)]


def _oracle_support(M, i):
    """Find the cone containing u_{i+}+u_{i-} by trying every maximal cone."""
    v = [a + b for a, b in zip(ray_coords(M, RayId(i, PLUS)), ray_coords(M, RayId(i, MINUS)))]
    for signs in maximal_cones(M):
        x = solve_exact(cone_matrix(M, signs), v)
        if all(q >= 0 for q in x):
            return sorted((RayId(j, s), int(q)) for j, (s, q) in enumerate(zip(signs, x), start=1) if q)
    raise AssertionError("fan is not complete")


@given(bott_matrices(max_r=5, lo=-4, hi=4))
@settings(max_examples=80)
def test_relation_matches_cone_search(M):
    for rel in all_relations(M):
        assert sorted(rel.gamma) == _oracle_support(M, rel.i)


@given(bott_matrices(max_r=7, lo=-6, hi=6))
def test_relation_invariants(M):
    for rel in all_relations(M):
        assert check_relation(M, rel)
        assert all(c > 0 for _, c in rel.gamma)
        assert all(ray.index > rel.i for ray, _ in rel.gamma)
        # gamma lies in one cone: at most one sign per index
        idx = [ray.index for ray, _ in rel.gamma]
        assert len(idx) == len(set(idx))
        # minus rays in gamma are exactly the later pivots
        assert {ray.index for ray, _ in rel.gamma if ray.sign == MINUS} == set(rel.trace.pivots[1:])
        assert rel.degree_sum == sum(c for _, c in rel.gamma)


@given(bott_matrices(max_r=7, lo=-6, hi=6))
def test_trace_recurrences(M):
    for i in range(1, M.r + 1):
        trace, _ = reduction_trace(M, i)
        a, p = trace.a_table, trace.pivots
        assert list(p) == sorted(p) and p[0] == i
        for j in range(i + 1, M.r + 1):
            assert a[(1, j)] == M.beta(i, j)
        if len(p) >= 2:
            j2 = p[1]
            assert j2 == min(j for j in range(i + 1, M.r + 1) if M.beta(i, j) > 0)
            for j in range(j2 + 1, M.r + 1):
                assert a[(2, j)] == M.beta(i, j2) * M.beta(j2, j) - M.beta(i, j)
        for k in range(2, len(p)):
            jn = p[k]
            assert a[(k, jn)] < 0
            assert all(a[(k, j)] >= 0 for j in range(p[k - 1] + 1, jn))
            for j in range(jn + 1, M.r + 1):
                assert a[(k + 1, j)] == -a[(k, jn)] * M.beta(jn, j) + a[(k, j)]


@given(bott_matrices(max_r=6, lo=-4, hi=4))
@settings(max_examples=50)
def test_relation_wall_carries_class(M):
    for rel in all_relations(M):
        assert wall_curve_class(M, relation_wall(M, rel.i)) == rel.curve_class(M.r)


@given(bott_matrices(max_r=5, lo=-4, hi=4))
@settings(max_examples=40)
def test_mori_generators_basis_of_wall_classes(M):
    gens = mori_generators(M)
    classes = set(wall_classes(M, enumerate_walls(M)))
    assert set(gens) <= classes
    for c in classes:
        x = coordinates_in_relation_basis(M, c)
        assert all(q >= 0 and q.denominator == 1 for q in x)


def test_coordinates_of_generators_are_unit_vectors(m7):
    for k, g in enumerate(mori_generators(m7)):
        x = coordinates_in_relation_basis(m7, g)
        assert x == [1 if j == k else 0 for j in range(7)]


def test_relation_table_text(m7):
    table = format_relation_table(all_relations(m7))
    assert "I_1 = {1, 5, 6}" in table
    assert table.count("\n") == 6


def test_row_out_of_range(m7):
    with pytest.raises(IndexError):
        primitive_relation(m7, 8)
