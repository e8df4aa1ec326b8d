"""Divisor arithmetic on a Bott tower.

The plus-rays ``D_{rho_j^+}`` give a basis of the Picard group. Minus-ray
divisors are rewritten through the table ``h[i][j]`` obtained from
``div(chi^{e_i^+}) ~ 0``::

    D_{rho_i^-} ~ D_{rho_i^+} - sum_{k<i} beta_ki D_{rho_k^-}
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import MINUS, PLUS, BottMatrix, Divisor, PlusDivisor, RayId
from .relations import PrimitiveRelation, all_relations


@dataclass(frozen=True)
class HTable:
    """Lower unitriangular ``h``; ``h[i, j]`` is the coefficient of ``D_{j+}`` in ``D_{i-}``."""

    rows: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i - 1][j - 1] if j <= i else 0

    @property
    def r(self) -> int:
        return len(self.rows)


def h_table(M: BottMatrix) -> HTable:
    r = M.r
    h = [[0] * r for _ in range(r)]
    for i in range(1, r + 1):
        h[i - 1][i - 1] = 1
        for j in range(1, i):
            h[i - 1][j - 1] = -sum(M.beta(k, i) * h[k - 1][j - 1] for k in range(j, i))
    return HTable(tuple(tuple(row[:i]) for i, row in enumerate(h, start=1)))


def to_plus_basis(M: BottMatrix, D: Divisor, h: HTable | None = None) -> PlusDivisor:
    """``g_i = a_{i+} + sum_{j>=i} a_{j-} h[j, i]``."""
    if D.r != M.r:
        raise ValueError(f"divisor has r={D.r}, tower has r={M.r}")
    h = h or h_table(M)
    return PlusDivisor(tuple(
        D.plus[i - 1] + sum((D.minus[j - 1] * h[j, i] for j in range(i, M.r + 1)), Fraction(0))
        for i in range(1, M.r + 1)
    ))


def _as_divisor(M: BottMatrix, D: Divisor | PlusDivisor) -> Divisor:
    if isinstance(D, PlusDivisor):
        D = D.as_divisor()
    if D.r != M.r:
        raise ValueError(f"divisor has r={D.r}, tower has r={M.r}")
    return D


def relation_degree(D: Divisor, rel: PrimitiveRelation) -> Fraction:
    """``D . r(P_i) = a_{i+} + a_{i-} - sum c_j a_{gamma_j}``."""
    d = D[RayId(rel.i, PLUS)] + D[RayId(rel.i, MINUS)]
    for ray, c in rel.gamma:
        d -= c * D[ray]
    return d


@dataclass(frozen=True)
class NefCertificate:
    d: tuple[Fraction, ...]
    is_nef: bool
    is_ample: bool


def relation_degrees(M: BottMatrix, D: Divisor | PlusDivisor,
                     relations: Sequence[PrimitiveRelation] | None = None) -> NefCertificate:
    D = _as_divisor(M, D)
    relations = relations if relations is not None else all_relations(M)
    d = tuple(relation_degree(D, rel) for rel in relations)
    return NefCertificate(d, all(x >= 0 for x in d), all(x > 0 for x in d))


def nef_generators(M: BottMatrix, relations: Sequence[PrimitiveRelation] | None = None) -> list[PlusDivisor]:
    """Generators ``D_1, ..., D_r`` of the nef cone, in the plus basis.

    ``D_m = D_{m+} + sum_{k<m} c_k D_k`` where ``c_k`` is the coefficient of
    ``e_m^+`` in ``r(P_k)``. The result is checked to be the dual basis of the
    primitive relations before it is returned.
    """
    r = M.r
    relations = relations if relations is not None else all_relations(M)
    gens: list[PlusDivisor] = []
    for m in range(1, r + 1):
        g = [Fraction(0)] * r
        g[m - 1] = Fraction(1)
        D_m = PlusDivisor(tuple(g))
        for k in range(1, m):
            c = relations[k - 1].coefficient(RayId(m, PLUS))
            if c:
                D_m = D_m + gens[k - 1].scale(c)
        gens.append(D_m)
    pairing = dual_pairing(M, gens, relations)
    for m in range(r):
        for i in range(r):
            if pairing[m][i] != (1 if m == i else 0):
                raise ArithmeticError(f"D_{m + 1} . r(P_{i + 1}) = {pairing[m][i]}, dual basis broken")
    return gens


def nef_recursion(M: BottMatrix, relations: Sequence[PrimitiveRelation] | None = None
                  ) -> list[list[tuple[int, int]]]:
    """For each ``m``, the pairs ``(k, c)`` with ``D_m = sum c D_k + D_{m+}``."""
    relations = relations if relations is not None else all_relations(M)
    out = []
    for m in range(1, M.r + 1):
        out.append([(k, relations[k - 1].coefficient(RayId(m, PLUS))) for k in range(1, m)
                    if relations[k - 1].coefficient(RayId(m, PLUS))])
    return out


def dual_pairing(M: BottMatrix, divisors: Sequence[PlusDivisor | Divisor],
                 relations: Sequence[PrimitiveRelation] | None = None) -> list[list[Fraction]]:
    """Matrix of intersection numbers ``divisors[m] . r(P_i)``."""
    relations = relations if relations is not None else all_relations(M)
    return [[relation_degree(_as_divisor(M, D), rel) for rel in relations] for D in divisors]


def canonical_data(M: BottMatrix) -> tuple[Divisor, list[Divisor]]:
    """``-K`` and the relative anticanonical divisors ``D_{i+} + D_{i-}``."""
    r = M.r
    relative = [Divisor.from_map(r, {RayId(i, PLUS): 1, RayId(i, MINUS): 1}) for i in range(1, r + 1)]
    return Divisor.anticanonical(r), relative


def parse_divisor(M: BottMatrix, text: str) -> Divisor:
    """Parse ``"1+:a,1-:b,..."`` with rational coefficients; unlisted rays are 0."""
    coeff: dict[RayId, Fraction] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ":" not in part:
            raise ValueError(f"bad divisor term {part!r}; expected RAY:COEFF like '2+:1/2'")
        ray_s, q_s = part.split(":", 1)
        ray = RayId.parse(ray_s)
        if ray.index > M.r:
            raise ValueError(f"ray {ray} out of range for r={M.r}")
        if ray in coeff:
            raise ValueError(f"ray {ray} listed twice")
        coeff[ray] = _parse_rational(q_s)
    return Divisor.from_map(M.r, coeff)


def parse_plus_divisor(M: BottMatrix, text: str) -> PlusDivisor:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != M.r:
        raise ValueError(f"plus-divisor needs {M.r} coefficients, got {len(parts)}")
    return PlusDivisor(tuple(_parse_rational(p) for p in parts))


def _parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"bad rational {s!r}; use integers or a/b")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad rational {s!r}") from None
