"""Primitive relations of a Bott tower via the pivot reduction.

The primitive collections are the pairs ``{rho_i^+, rho_i^-}``. Starting from

    e_i^+ + e_i^- = -sum_{j>i} beta_ij e_j^+

the reduction repeatedly takes the least index whose current coefficient is
negative and rewrites ``-e_j^+ = e_j^- + sum_{l>j} beta_jl e_l^+``. When no
negative coefficient is left, the right-hand side is a positive combination
of rays from one cone of the fan: that is the primitive relation.

Sign convention: the relation coefficient on ``e_j^+`` for ``i < j < j_2``
is ``-beta_ij`` (so it is positive). Read literally, the auxiliary ``b_j``
bookkeeping would give ``beta_ij`` there; the worked examples and the
positivity of the coefficients both require the sign used here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import MINUS, PLUS, BottMatrix, CurveClass, RayId, fmt_q, solve_exact
from .fan import Wall, make_wall, ray_coords


@dataclass(frozen=True)
class ReductionTrace:
    """Pivots ``I_i = (j_1 = i, j_2, ...)`` and the table ``a[(k, j)]``.

    Level 1 stores ``a_{1,j} = beta_ij``. For ``k >= 2`` the entries are the
    coefficients of ``e_j^+`` after the ``k``-th pivot has been substituted.
    """

    pivots: tuple[int, ...]
    a_table: dict[tuple[int, int], int] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class PrimitiveRelation:
    """``e_i^+ + e_i^- = sum c * u_rho`` over the rays of ``gamma``."""

    i: int
    gamma: tuple[tuple[RayId, int], ...]
    trace: ReductionTrace = field(compare=False)

    @property
    def degree_sum(self) -> int:
        """Sum of the coefficients ``c_j``; equals ``2 + K . r(P_i)``."""
        return sum(c for _, c in self.gamma)

    @property
    def support(self) -> tuple[RayId, ...]:
        return tuple(ray for ray, _ in self.gamma)

    def coefficient(self, ray: RayId) -> int:
        return next((c for rho, c in self.gamma if rho == ray), 0)

    def intersection(self, ray: RayId) -> int:
        """``D_rho . r(P_i)``: 1 on the collection, ``-c`` on gamma, else 0."""
        if ray.index == self.i:
            return 1
        return -self.coefficient(ray)

    def curve_class(self, r: int) -> CurveClass:
        return CurveClass(tuple(self.intersection(RayId(j, PLUS)) for j in range(1, r + 1)))

    def __str__(self) -> str:
        lhs = f"e_{self.i}^+ + e_{self.i}^-"
        if not self.gamma:
            return lhs + " = 0"
        terms = [(f"{c} " if c != 1 else "") + ray.vector_name for ray, c in self.gamma]
        return lhs + " = " + " + ".join(terms)


def reduction_trace(M: BottMatrix, i: int) -> tuple[ReductionTrace, dict[int, tuple[str, int]]]:
    """Run the reduction for row ``i``; return the trace and ``{j: (sign, coeff)}``."""
    r = M.r
    if not 1 <= i <= r:
        raise IndexError(f"row {i} out of range for r={r}")
    a: dict[tuple[int, int], int] = {(1, j): M.beta(i, j) for j in range(i + 1, r + 1)}
    pivots = [i]
    terms: dict[int, tuple[str, int]] = {}

    j2 = next((j for j in range(i + 1, r + 1) if M.beta(i, j) > 0), None)
    if j2 is None:
        for j in range(i + 1, r + 1):
            terms[j] = (PLUS, -M.beta(i, j))
        return ReductionTrace((i,), a), terms

    for j in range(i + 1, j2):
        terms[j] = (PLUS, -M.beta(i, j))
    terms[j2] = (MINUS, M.beta(i, j2))
    pivots.append(j2)
    for j in range(j2 + 1, r + 1):
        a[(2, j)] = M.beta(i, j2) * M.beta(j2, j) - M.beta(i, j)

    k, jk = 2, j2
    while True:
        nxt = next((j for j in range(jk + 1, r + 1) if a[(k, j)] < 0), None)
        stop = r + 1 if nxt is None else nxt
        for j in range(jk + 1, stop):
            terms[j] = (PLUS, a[(k, j)])
        if nxt is None:
            break
        pivot_coeff = a[(k, nxt)]
        terms[nxt] = (MINUS, -pivot_coeff)
        pivots.append(nxt)
        for j in range(nxt + 1, r + 1):
            a[(k + 1, j)] = -pivot_coeff * M.beta(nxt, j) + a[(k, j)]
        k, jk = k + 1, nxt
    return ReductionTrace(tuple(pivots), a), terms


def primitive_relation(M: BottMatrix, i: int) -> PrimitiveRelation:
    trace, terms = reduction_trace(M, i)
    gamma = tuple((RayId(j, s), c) for j, (s, c) in sorted(terms.items()) if c)
    rel = PrimitiveRelation(i, gamma, trace)
    if any(c <= 0 for _, c in gamma):
        raise ArithmeticError(f"non-positive coefficient in r(P_{i}): {rel}")
    if not check_relation(M, rel):
        raise ArithmeticError(f"r(P_{i}) fails the lattice identity: {rel}")
    return rel


def check_relation(M: BottMatrix, rel: PrimitiveRelation) -> bool:
    """``e_i^+ + e_i^- - sum c u_rho == 0`` in the lattice."""
    total = [a + b for a, b in zip(ray_coords(M, RayId(rel.i, PLUS)), ray_coords(M, RayId(rel.i, MINUS)))]
    for ray, c in rel.gamma:
        total = [t - c * u for t, u in zip(total, ray_coords(M, ray))]
    return not any(total)


def all_relations(M: BottMatrix) -> list[PrimitiveRelation]:
    return [primitive_relation(M, i) for i in range(1, M.r + 1)]


def relation_cones(M: BottMatrix, i: int) -> tuple[list[RayId], list[RayId]]:
    """Generators of the two maximal cones whose intersection realises ``r(P_i)``.

    The first has ``e_i^+`` and the second ``e_i^-``; both take ``e_j^-``
    exactly for the later pivots ``j`` and ``e_j^+`` elsewhere.
    """
    trace, _ = reduction_trace(M, i)
    later = set(trace.pivots[1:])
    shared = {j: MINUS if j in later else PLUS for j in range(1, M.r + 1) if j != i}
    first = [RayId(j, PLUS if j == i else shared[j]) for j in range(1, M.r + 1)]
    second = [RayId(j, MINUS if j == i else shared[j]) for j in range(1, M.r + 1)]
    return first, second


def relation_wall(M: BottMatrix, i: int) -> Wall:
    first, _ = relation_cones(M, i)
    return make_wall(M, i, [None if ray.index == i else ray.sign for ray in first])


def mori_generators(M: BottMatrix, relations: list[PrimitiveRelation] | None = None) -> list[CurveClass]:
    relations = relations if relations is not None else all_relations(M)
    return [rel.curve_class(M.r) for rel in relations]


def coordinates_in_relation_basis(M: BottMatrix, cls: CurveClass,
                                  relations: list[PrimitiveRelation] | None = None) -> list[Fraction]:
    """Solve ``cls = sum x_i r(P_i)`` by exact elimination."""
    gens = mori_generators(M, relations)
    a = [[int(g.ints[row]) for g in gens] for row in range(M.r)]
    rhs = cls.ints
    if any(q.denominator != 1 for q in rhs):
        den = math.lcm(*(q.denominator for q in rhs))
        return [x / den for x in solve_exact(a, [int(q * den) for q in rhs])]
    return solve_exact(a, [int(q) for q in rhs])


def format_relation_table(relations: list[PrimitiveRelation]) -> str:
    lines = []
    for rel in relations:
        pivots = "{" + ", ".join(map(str, rel.trace.pivots)) + "}"
        lines.append(f"r(P_{rel.i}): {rel}    I_{rel.i} = {pivots}    sum c = {fmt_q(rel.degree_sum)}")
    return "\n".join(lines)
