"""Fano, weak Fano and log Fano verdicts, Mori-ray typing, and census sweeps.

Fano-ness is decided twice: once from the row conditions on the matrix
entries (``N1``/``N2`` below) and once from the degree sums of the primitive
relations. The two must agree row by row; a disagreement is a bug and raises
:class:`InconsistencyError`.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import BottMatrix, CurveClass, Divisor, PlusDivisor
from .divisors import nef_generators, relation_degrees
from .fan import enumerate_walls, kleiman_test, oracle_report, wall_curve_class
from .relations import (
    PrimitiveRelation,
    all_relations,
    coordinates_in_relation_basis,
    relation_wall,
)


class InconsistencyError(RuntimeError):
    """Two independent routes disagreed."""


# --------------------------------------------------------------------------
# Row conditions
# --------------------------------------------------------------------------

def _eta(M: BottMatrix, i: int) -> tuple[list[int], list[int]]:
    later = range(i + 1, M.r + 1)
    return [j for j in later if M.beta(i, j) > 0], [j for j in later if M.beta(i, j) < 0]


def condition_n1(M: BottMatrix, i: int) -> str | None:
    """Label of the subcase of ``N^1_i`` that holds, or ``None``."""
    b = M.beta
    r = M.r
    eta_plus, eta_minus = _eta(M, i)
    if not eta_plus:
        if len(eta_minus) == 0 or (len(eta_minus) == 1 and b(i, eta_minus[0]) == -1):
            return "(i)"
        return None
    for m in range(i + 1, r + 1):
        if (b(i, m) == 1
                and all(b(i, j) == 0 for j in range(i + 1, m))
                and all(b(i, j) == b(m, j) for j in range(m + 1, r + 1))):
            return "(ii)"
    return None


def condition_n2(M: BottMatrix, i: int) -> str | None:
    """Label of the first subcase of ``N^2_i`` that holds, or ``None``."""
    b = M.beta
    r = M.r
    eta_plus, eta_minus = _eta(M, i)
    if not eta_plus:
        vals = sorted(b(i, j) for j in eta_minus)
        if vals in ([], [-1], [-2], [-1, -1]):
            return "(i)"
        return None

    def A(m: int, j: int) -> int:
        return b(i, m) * b(m, j) - b(i, j)

    later = range(i + 1, r + 1)
    for m in later:
        if (b(i, m) in (1, 2)
                and all(b(i, j) == 0 for j in range(i + 1, m))
                and all(A(m, j) == 0 for j in range(m + 1, r + 1))):
            return "(ii)(a)"
    pairs = [(m1, m2) for m1 in later for m2 in range(m1 + 1, r + 1)]
    for m1, m2 in pairs:
        if (-b(i, m1) == 1 and b(i, m2) == 1
                and all(b(i, j) == 0 for j in range(i + 1, m2) if j != m1)
                and all(A(m2, j) == 0 for j in range(m2 + 1, r + 1))):
            return "(ii)(b)"
    for m1, m2 in pairs:
        if (b(i, m1) == 1 and A(m1, m2) == 1
                and all(b(i, j) == 0 for j in range(i + 1, m1))
                and all(A(m1, j) == 0 for j in range(m1 + 1, r + 1) if j != m2)):
            return "(ii)(c)"
    for m1, m2 in pairs:
        if (b(i, m1) == 1 and A(m1, m2) == -1
                and all(b(i, j) == 0 for j in range(i + 1, m1))
                and all(A(m1, j) == 0 for j in range(m1 + 1, m2))
                and all(b(m2, j) + A(m1, j) == 0 for j in range(m2 + 1, r + 1))):
            return "(ii)(d)"
    return None


@dataclass(frozen=True)
class RowConditions:
    i: int
    n1: str | None
    n2: str | None


@dataclass(frozen=True)
class FanoReport:
    per_row: tuple[RowConditions, ...]
    degree_sums: tuple[int, ...]
    is_fano: bool
    is_weak_fano: bool
    # Fano towers have H^i(T_X) = 0 for i >= 1; no cohomology is computed here.
    locally_rigid: bool

    @property
    def satisfies_I(self) -> bool:
        return all(row.n1 is not None for row in self.per_row)

    @property
    def satisfies_II(self) -> bool:
        return all(row.n2 is not None for row in self.per_row)

    @property
    def label(self) -> str:
        if self.is_fano:
            return "Fano"
        return "weak Fano (not Fano)" if self.is_weak_fano else "not weak Fano"


def classify_fano(M: BottMatrix, relations: Sequence[PrimitiveRelation] | None = None) -> FanoReport:
    relations = relations if relations is not None else all_relations(M)
    rows = tuple(RowConditions(i, condition_n1(M, i), condition_n2(M, i)) for i in range(1, M.r + 1))
    sums = tuple(rel.degree_sum for rel in relations)
    for row, s in zip(rows, sums):
        if (row.n1 is not None) != (s <= 1) or (row.n2 is not None) != (s <= 2):
            raise InconsistencyError(
                f"row {row.i} of\n{M}\nN1={row.n1} N2={row.n2} but degree sum is {s}")
    is_fano = all(s <= 1 for s in sums)
    is_weak = all(s <= 2 for s in sums)
    return FanoReport(rows, sums, is_fano, is_weak, locally_rigid=is_fano)


# --------------------------------------------------------------------------
# Log Fano pairs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LogFanoReport:
    k: tuple[Fraction, ...]
    is_log_fano: bool
    floor_ok: bool
    reason: str = ""


def log_fano_certificate(M: BottMatrix, D: Divisor | PlusDivisor,
                         relations: Sequence[PrimitiveRelation] | None = None) -> LogFanoReport:
    """``k_i = d_i(D) - 2 + sum c_j``; ``(X, D)`` is log Fano iff ``floor(D) = 0`` and all ``k_i < 0``."""
    if isinstance(D, PlusDivisor):
        D = D.as_divisor()
    relations = relations if relations is not None else all_relations(M)
    cert = relation_degrees(M, D, relations)
    k = tuple(d - 2 + rel.degree_sum for d, rel in zip(cert.d, relations))
    bad = [f"D_{ray}={a}" for ray, a in D.items() if not (0 <= a < 1)]
    floor_ok = not bad
    if not floor_ok:
        reason = "coefficients outside [0, 1): " + ", ".join(bad)
    elif all(x < 0 for x in k):
        reason = "-(K + D) is ample"
    else:
        reason = "k_i >= 0 for i in " + ", ".join(str(i) for i, x in enumerate(k, start=1) if x >= 0)
    return LogFanoReport(k, floor_ok and all(x < 0 for x in k), floor_ok, reason)


# --------------------------------------------------------------------------
# Extremal and Mori rays
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RayType:
    i: int
    is_extremal: bool
    is_mori: bool
    canonical_degree: int


def ray_types(M: BottMatrix, relations: Sequence[PrimitiveRelation] | None = None) -> list[RayType]:
    relations = relations if relations is not None else all_relations(M)
    out = []
    for rel in relations:
        by_shape = len(rel.gamma) == 0 or (len(rel.gamma) == 1 and rel.gamma[0][1] == 1)
        k_deg = -2 + rel.degree_sum
        if by_shape != (k_deg < 0):
            raise InconsistencyError(f"r(P_{rel.i}): shape says Mori={by_shape}, K.r(P_i)={k_deg}")
        out.append(RayType(rel.i, True, by_shape, k_deg))
    return out


# --------------------------------------------------------------------------
# Oracle cross-check
# --------------------------------------------------------------------------

@dataclass
class OracleCheck:
    n_walls: int
    oracle_classes: tuple[CurveClass, ...]
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def oracle_cross_check(M: BottMatrix, divisors: Sequence[Divisor | PlusDivisor] = (),
                       cap: int | None = None) -> OracleCheck:
    """Compare every fast-path result with the exhaustive wall enumeration.

    Checks: nef/ample of ``-K`` and of each given divisor; every ``r(P_i)``
    is a wall class; every wall class is a nonnegative integer combination of
    the ``r(P_i)`` (so both sets generate the same cone, whose extremal rays
    are then exactly the ``r(P_i)``); the wall of each relation carries its
    class; the nef generators are nef, and not ample unless ``r = 1``.
    """
    walls = enumerate_walls(M, cap)
    relations = all_relations(M)
    fano = classify_fano(M, relations)
    anti = oracle_report(M, None, walls=walls)
    check = OracleCheck(len(walls), anti.classes)
    bad = check.mismatches

    if anti.is_nef != fano.is_weak_fano:
        bad.append(f"-K nef: oracle {anti.is_nef}, fast path {fano.is_weak_fano}")
    if anti.is_ample != fano.is_fano:
        bad.append(f"-K ample: oracle {anti.is_ample}, fast path {fano.is_fano}")
    for D in divisors:
        nef, ample, _ = kleiman_test(walls, D)
        f = relation_degrees(M, D, relations)
        if (nef, ample) != (f.is_nef, f.is_ample):
            bad.append(f"divisor {D}: oracle nef/ample {nef}/{ample}, "
                       f"fast path {f.is_nef}/{f.is_ample}")

    classes = set(anti.classes)
    for rel in relations:
        c = rel.curve_class(M.r)
        if c not in classes:
            bad.append(f"r(P_{rel.i}) = {c} is not a wall class")
        wc = wall_curve_class(M, relation_wall(M, rel.i))
        if wc != c:
            bad.append(f"wall of r(P_{rel.i}) has class {wc}, relation has {c}")
    for c in anti.classes:
        x = coordinates_in_relation_basis(M, c, relations)
        if any(q < 0 or q.denominator != 1 for q in x):
            bad.append(f"wall class {c} has coordinates {[str(q) for q in x]} in the r(P_i) basis")

    for m, D_m in enumerate(nef_generators(M, relations), start=1):
        nef, ample, _ = kleiman_test(walls, D_m)
        # on P^1 the single generator is ample; otherwise each spans a boundary ray
        if not nef or (ample and M.r > 1):
            bad.append(f"nef generator D_{m}: oracle nef={nef} ample={ample}")
    return check


# --------------------------------------------------------------------------
# Census
# --------------------------------------------------------------------------

CENSUS_CLASSES = ("fano", "weak_fano_not_fano", "neither")
DEFAULT_CENSUS_BUDGET = 2_000_000


class CensusBudgetExceeded(ValueError):
    pass


@dataclass
class CensusResult:
    r: int
    lo: int
    hi: int
    total: int
    counts: dict[str, int]
    samples: dict[str, list[BottMatrix]]
    oracle_checked: int = 0
    oracle_mismatches: list[str] = field(default_factory=list)


def census_size(r: int, lo: int, hi: int) -> int:
    return (hi - lo + 1) ** (r * (r - 1) // 2)


def iter_box(r: int, lo: int, hi: int, start: int = 0, stop: int | None = None):
    """Matrices with all entries in ``[lo, hi]``, lexicographic in row-major entry order."""
    n = r * (r - 1) // 2
    values = itertools.product(range(lo, hi + 1), repeat=n)
    for flat in itertools.islice(values, start, stop):
        rows, pos = [], 0
        for i in range(1, r + 1):
            rows.append(flat[pos:pos + r - i])
            pos += r - i
        yield BottMatrix(r, tuple(rows))


def _census_slice(args) -> tuple[dict[str, int], dict[str, list[BottMatrix]], int, list[str]]:
    r, lo, hi, start, stop, n_samples, oracle_every = args
    counts = dict.fromkeys(CENSUS_CLASSES, 0)
    samples: dict[str, list[BottMatrix]] = {k: [] for k in CENSUS_CLASSES}
    checked, mismatches = 0, []
    for idx, M in enumerate(iter_box(r, lo, hi, start, stop), start=start):
        rep = classify_fano(M)
        key = "fano" if rep.is_fano else "weak_fano_not_fano" if rep.is_weak_fano else "neither"
        counts[key] += 1
        if len(samples[key]) < n_samples:
            samples[key].append(M)
        if oracle_every and idx % oracle_every == 0:
            checked += 1
            mismatches += [f"matrix #{idx}: {msg}" for msg in oracle_cross_check(M).mismatches]
    return counts, samples, checked, mismatches


def census(r: int, lo: int, hi: int, jobs: int = 1, samples: int = 0, oracle_every: int = 0,
           budget: int = DEFAULT_CENSUS_BUDGET) -> CensusResult:
    """Classify every tower with entries in ``[lo, hi]``.

    The box is cut into ``jobs`` contiguous lexicographic slices; merging is
    addition of counts and concatenation of samples in slice order, so the
    result does not depend on ``jobs``. ``oracle_every=N`` runs the wall
    oracle on every N-th matrix (by global index).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    total = census_size(r, lo, hi)
    if total > budget:
        raise CensusBudgetExceeded(
            f"{total} matrices exceeds the budget of {budget}; narrow [lo, hi] or lower r")
    jobs = max(1, min(jobs, total))
    bounds = [total * k // jobs for k in range(jobs + 1)]
    tasks = [(r, lo, hi, bounds[k], bounds[k + 1], samples, oracle_every) for k in range(jobs)]
    if jobs == 1:
        parts = [_census_slice(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_census_slice, tasks))

    result = CensusResult(r, lo, hi, total, dict.fromkeys(CENSUS_CLASSES, 0),
                          {k: [] for k in CENSUS_CLASSES})
    for counts, smp, checked, mism in parts:
        for key in CENSUS_CLASSES:
            result.counts[key] += counts[key]
            room = samples - len(result.samples[key])
            result.samples[key].extend(smp[key][:max(room, 0)])
        result.oracle_checked += checked
        result.oracle_mismatches += mism
    return result
