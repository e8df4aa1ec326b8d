from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bottkit.core import MINUS, PLUS, BottMatrix, Divisor, PlusDivisor, RayId
from bottkit.divisors import (
    canonical_data,
    dual_pairing,
    h_table,
    nef_generators,
    nef_recursion,
    parse_divisor,
    parse_plus_divisor,
    relation_degrees,
    to_plus_basis,
)
from bottkit.fan import build_rays, enumerate_walls, kleiman_test, wall_curve_class, wall_degree
from bottkit.relations import all_relations
from conftest import bott_matrices


def P(*g):
    return PlusDivisor(tuple(Fraction(x) for x in g))


def unit(r, m):
    return P(*[1 if j == m else 0 for j in range(1, r + 1)])


def test_h_table_small():
    h = h_table(BottMatrix.hirzebruch(1))
    assert (h[1, 1], h[2, 1], h[2, 2], h[1, 2]) == (1, 1, 1, 0)
    M = BottMatrix.from_entries(3, {(1, 2): 2, (1, 3): -1, (2, 3): 3})
    h = h_table(M)
    # D_{2-} ~ D_{2+} - beta_12 D_{1-};  D_{3-} ~ D_{3+} - beta_13 D_{1-} - beta_23 D_{2-}
    assert h.rows == ((1,), (-2, 1), (1 + 6, -3, 1))


def _principal(M, m):
    return Divisor.from_map(M.r, {ray.id: ray.coords[m] for ray in build_rays(M) if ray.coords[m]})


@given(bott_matrices(max_r=7, lo=-5, hi=5))
def test_principal_divisors_vanish(M):
    for m in range(M.r):
        assert to_plus_basis(M, _principal(M, m)) == P(*[0] * M.r)


divisor_coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(bott_matrices(max_r=5, lo=-4, hi=4), st.data())
@settings(max_examples=40)
def test_basis_change_sound_against_walls(M, data):
    coeffs = data.draw(st.lists(divisor_coeffs, min_size=2 * M.r, max_size=2 * M.r))
    D = Divisor(M.r, tuple(coeffs[:M.r]), tuple(coeffs[M.r:]))
    g = to_plus_basis(M, D)
    for w in enumerate_walls(M):
        assert wall_degree(w, D) == wall_curve_class(M, w).dot(g)


def test_hirzebruch_anticanonical_plus_basis():
    assert to_plus_basis(BottMatrix.hirzebruch(1), Divisor.anticanonical(2)) == P(3, 2)


def test_relation_degrees_examples():
    H1 = BottMatrix.hirzebruch(1)
    cert = relation_degrees(H1, Divisor.anticanonical(2))
    assert cert.d == (1, 2) and cert.is_ample
    cert = relation_degrees(BottMatrix.hirzebruch(2), Divisor.anticanonical(2))
    assert cert.d == (0, 2) and cert.is_nef and not cert.is_ample
    cert = relation_degrees(H1, P(Fraction(1, 2), 0))
    assert cert.d == (Fraction(1, 2), 0)


def test_nef_generators_hirzebruch():
    H1 = BottMatrix.hirzebruch(1)
    gens = nef_generators(H1)
    assert gens == [P(1, 0), P(1, 1)]
    # D_1 + D_{2+} is D_{2-}
    assert to_plus_basis(H1, Divisor.from_map(2, {RayId(2, MINUS): 1})) == gens[1]


def test_nef_generators_m7(m7):
    gens = nef_generators(m7)
    e = [unit(7, m) for m in range(1, 8)]
    D = {1: e[0]}
    D[2] = D[1] + e[1]
    D[3] = D[1] + e[2]
    D[4] = D[1] + e[3]
    D[5] = D[3] + D[4] + e[4]
    D[6] = D[2] + D[5] + e[5]
    D[7] = D[1] + D[2] + D[3] + D[6] + e[6]
    assert gens == [D[m] for m in range(1, 8)]
    assert gens[6] == P(6, 2, 2, 1, 1, 1, 1)
    rec = nef_recursion(m7)
    assert [k for k, _ in rec[4]] == [3, 4]
    assert [k for k, _ in rec[5]] == [2, 5]
    assert [k for k, _ in rec[6]] == [1, 2, 3, 6]


def test_nef_generators_identity():
    assert nef_generators(BottMatrix.identity(3)) == [unit(3, m) for m in (1, 2, 3)]


@given(bott_matrices(max_r=8, lo=-5, hi=5))
def test_dual_basis(M):
    pairing = dual_pairing(M, nef_generators(M))
    assert pairing == [[1 if a == b else 0 for b in range(M.r)] for a in range(M.r)]


@given(bott_matrices(max_r=5, lo=-3, hi=3))
@settings(max_examples=40)
def test_nef_generators_on_boundary(M):
    walls = enumerate_walls(M)
    gens = nef_generators(M)
    for D in gens:
        nef, ample, _ = kleiman_test(walls, D)
        assert nef and ample == (M.r == 1)
    total = gens[0]
    for D in gens[1:]:
        total = total + D
    assert kleiman_test(walls, total)[1]


def test_canonical_data():
    H1 = BottMatrix.hirzebruch(1)
    K, rel = canonical_data(H1)
    assert K == Divisor.anticanonical(2)
    assert to_plus_basis(H1, rel[1]) == P(1, 2)
    # rewriting D_{2+} ~ D_{2-} + beta_12 D_{1-}
    rewritten = Divisor.from_map(2, {RayId(2, MINUS): 2, RayId(1, MINUS): H1.beta(1, 2)})
    assert to_plus_basis(H1, rewritten) == P(1, 2)
    total = rel[0] + rel[1]
    assert total == K


def test_parse_divisor():
    M = BottMatrix.identity(2)
    D = parse_divisor(M, "1+:3, 2-:-1/2")
    assert D[RayId(1, PLUS)] == 3 and D[RayId(2, MINUS)] == Fraction(-1, 2)
    assert parse_plus_divisor(M, "1/3, 2") == P(Fraction(1, 3), 2)
    for bad in ("1+:0.5", "3+:1", "1+", "1+:1,1+:2", "x:1", "1+:1/0"):
        with pytest.raises(ValueError):
            parse_divisor(M, bad)
    with pytest.raises(ValueError):
        parse_plus_divisor(M, "1")
