"""Fan of a Bott tower and the brute-force wall oracle.

The maximal cones are indexed by sign vectors ``(s_1, ..., s_r)``: cone
``sigma_s`` is spanned by ``e_1^{s_1}, ..., e_r^{s_r}``. Two maximal cones
meet in a wall exactly when their sign vectors differ in one position, so a
wall is named by that omitted position plus the shared signs.

Nothing in this module uses primitive relations; it is the independent
side of every fast-path check.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .core import (
    MINUS,
    PLUS,
    BottMatrix,
    CurveClass,
    Divisor,
    PlusDivisor,
    RayId,
    determinant,
    solve_exact,
)

DEFAULT_ORACLE_CAP = 16


class OracleCapExceeded(ValueError):
    """The tower is too tall for exhaustive wall enumeration."""


def oracle_cap(cap: int | None = None) -> int:
    """Explicit cap, else ``$BOTTKIT_ORACLE_CAP``, else 16."""
    if cap is not None:
        return cap
    env = os.environ.get("BOTTKIT_ORACLE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"BOTTKIT_ORACLE_CAP must be an integer, got {env!r}") from None
    return DEFAULT_ORACLE_CAP


@dataclass(frozen=True)
class Ray:
    id: RayId
    coords: tuple[int, ...]


def ray_coords(M: BottMatrix, ray: RayId) -> tuple[int, ...]:
    """Primitive generator of ``ray``: ``e_i^- = -e_i^+ - sum_{j>i} beta_ij e_j^+``."""
    i = ray.check(M.r).index
    v = [0] * M.r
    if ray.sign == PLUS:
        v[i - 1] = 1
    else:
        v[i - 1] = -1
        for j in range(i + 1, M.r + 1):
            v[j - 1] = -M.beta(i, j)
    return tuple(v)


def build_rays(M: BottMatrix) -> list[Ray]:
    """``e_1^+, ..., e_r^+, e_1^-, ..., e_r^-`` with exact coordinates."""
    return [Ray(RayId(i, s), ray_coords(M, RayId(i, s)))
            for s in (PLUS, MINUS) for i in range(1, M.r + 1)]


def cone_matrix(M: BottMatrix, signs: Sequence[str]) -> list[list[int]]:
    """Columns are the generators of the maximal cone with the given sign vector."""
    cols = [ray_coords(M, RayId(j, s)) for j, s in enumerate(signs, start=1)]
    return [[cols[c][row] for c in range(M.r)] for row in range(M.r)]


def maximal_cones(M: BottMatrix) -> Iterator[tuple[str, ...]]:
    return itertools.product((PLUS, MINUS), repeat=M.r)


def is_unimodular(M: BottMatrix, signs: Sequence[str]) -> bool:
    return abs(determinant(cone_matrix(M, signs))) == 1


@dataclass(frozen=True, order=True)
class Wall:
    """Codimension-one cone between the two maximal cones that differ at ``omitted``.

    ``signs`` has length ``r`` with ``None`` at the omitted position.
    ``relation_b[j-1]`` is the coefficient ``b_j`` in the wall relation
    ``u_{i+} + u_{i-} + sum_{j != i} b_j u_{j, signs[j]} = 0`` (0 at ``omitted``).
    """

    omitted: int
    signs: tuple[str | None, ...]
    relation_b: tuple[int, ...] = ()

    def shared_rays(self) -> list[RayId]:
        return [RayId(j, s) for j, s in enumerate(self.signs, start=1) if j != self.omitted]

    def flanking_cones(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        i = self.omitted - 1
        plus = tuple(PLUS if j == i else s for j, s in enumerate(self.signs))
        minus = tuple(MINUS if j == i else s for j, s in enumerate(self.signs))
        return plus, minus

    def relation_terms(self) -> list[tuple[RayId, int]]:
        """The rays with nonzero ``b_j`` in the wall relation."""
        return [(RayId(j, s), b) for j, (s, b) in enumerate(zip(self.signs, self.relation_b), start=1)
                if j != self.omitted and b]

    def __str__(self) -> str:
        return "cone(" + ", ".join(r.vector_name for r in self.shared_rays()) + ")"


def make_wall(M: BottMatrix, omitted: int, signs: Sequence[str | None]) -> Wall:
    """Solve the wall relation exactly and return the canonical wall.

    Writes ``u_{i-}`` in the basis of the maximal cone ``{u_{i+}} + shared``.
    The cone is unimodular so the solution must be integral with coefficient
    ``-1`` on ``u_{i+}``; both facts are checked, not assumed.
    """
    r = M.r
    if not 1 <= omitted <= r:
        raise ValueError(f"omitted index {omitted} out of range for r={r}")
    signs = tuple(None if j == omitted else signs[j - 1] for j in range(1, r + 1))
    for j, s in enumerate(signs, start=1):
        if j != omitted and s not in (PLUS, MINUS):
            raise ValueError(f"wall needs a sign at position {j}")
    basis = tuple(PLUS if s is None else s for s in signs)
    x = solve_exact(cone_matrix(M, basis), ray_coords(M, RayId(omitted, MINUS)))
    if any(q.denominator != 1 for q in x):
        raise ArithmeticError(f"non-integral wall relation at {signs}: the cone is not unimodular")
    if x[omitted - 1] != -1:
        raise ArithmeticError(f"wall relation has coefficient {x[omitted - 1]} on e_{omitted}^+")
    b = tuple(0 if j == omitted - 1 else -int(q) for j, q in enumerate(x))
    return Wall(omitted, signs, b)


def enumerate_walls(M: BottMatrix, cap: int | None = None) -> list[Wall]:
    """All ``r * 2^(r-1)`` walls of the fan, in canonical order."""
    cap = oracle_cap(cap)
    if M.r > cap:
        raise OracleCapExceeded(f"r={M.r} exceeds the oracle cap {cap}")
    walls = []
    for i in range(1, M.r + 1):
        for rest in itertools.product((PLUS, MINUS), repeat=M.r - 1):
            signs = rest[:i - 1] + (None,) + rest[i - 1:]
            walls.append(make_wall(M, i, signs))
    return walls


def check_wall_relation(M: BottMatrix, w: Wall) -> bool:
    total = [a + b for a, b in zip(ray_coords(M, RayId(w.omitted, PLUS)),
                                   ray_coords(M, RayId(w.omitted, MINUS)))]
    for ray, b in w.relation_terms():
        total = [t + b * u for t, u in zip(total, ray_coords(M, ray))]
    return not any(total)


def wall_intersection(w: Wall, ray: RayId) -> int:
    """``D_rho . V(tau)`` read off the wall relation."""
    if ray.index == w.omitted:
        return 1
    return w.relation_b[ray.index - 1] if w.signs[ray.index - 1] == ray.sign else 0


def wall_curve_class(M: BottMatrix, w: Wall) -> CurveClass:
    return CurveClass(tuple(wall_intersection(w, RayId(j, PLUS)) for j in range(1, M.r + 1)))


def wall_degree(w: Wall, D: Divisor | PlusDivisor) -> Fraction:
    """``D . V(tau)`` summed over all ``2r`` ray coefficients of ``D``."""
    if isinstance(D, PlusDivisor):
        D = D.as_divisor()
    total = D[RayId(w.omitted, PLUS)] + D[RayId(w.omitted, MINUS)]
    for ray, b in w.relation_terms():
        total += b * D[ray]
    return total


@dataclass(frozen=True)
class OracleReport:
    classes: tuple[CurveClass, ...]
    is_nef: bool
    is_ample: bool
    n_walls: int
    min_degree: Fraction


def wall_classes(M: BottMatrix, walls: Iterable[Wall]) -> tuple[CurveClass, ...]:
    """Distinct primitive wall classes in lexicographic order."""
    seen = {wall_curve_class(M, w).primitive() for w in walls}
    return tuple(sorted(seen, key=lambda c: c.ints))


def oracle_report(M: BottMatrix, D: Divisor | PlusDivisor | None = None, cap: int | None = None,
                  walls: Sequence[Wall] | None = None) -> OracleReport:
    """Brute-force Mori generators and Kleiman nef/ample test over every wall.

    ``D`` defaults to the anticanonical divisor. Pass ``walls`` to reuse an
    enumeration already done.
    """
    if walls is None:
        walls = enumerate_walls(M, cap)
    if D is None:
        D = Divisor.anticanonical(M.r)
    is_nef, is_ample, low = kleiman_test(walls, D)
    return OracleReport(wall_classes(M, walls), is_nef, is_ample, len(walls), low)


def kleiman_test(walls: Sequence[Wall], D: Divisor | PlusDivisor) -> tuple[bool, bool, Fraction]:
    """``(nef, ample, min degree)`` of ``D`` over the given walls."""
    if isinstance(D, PlusDivisor):
        D = D.as_divisor()
    low = min(wall_degree(w, D) for w in walls)
    return low >= 0, low > 0, low
