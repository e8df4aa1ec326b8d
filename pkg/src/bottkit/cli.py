"""Command-line front end.

    bottkit analyze MATRIX [--json] [--oracle] [--oracle-cap N]
    bottkit check MATRIX [--divisor SPEC | --plus-divisor SPEC] [--log-fano] [--require-ample]
    bottkit census R --lo LO --hi HI [--jobs N] [--samples K] [--oracle-every N]
    bottkit oracle MATRIX [--divisor SPEC | --plus-divisor SPEC] [--oracle-cap N]

Exit codes: 0 success / verdict true, 1 verdict false (``check``), 2 bad input,
3 oracle mismatch, 4 oracle cap exceeded, 5 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .classify import (
    CensusBudgetExceeded,
    FanoReport,
    InconsistencyError,
    RayType,
    RowConditions,
    census,
    classify_fano,
    log_fano_certificate,
    oracle_cross_check,
    ray_types,
)
from .core import (
    BottMatrix,
    CurveClass,
    Divisor,
    MatrixFormatError,
    PlusDivisor,
    RayId,
    fmt_q,
    read_matrix,
)
from .divisors import (
    nef_generators,
    nef_recursion,
    parse_divisor,
    parse_plus_divisor,
    relation_degrees,
)
from .fan import OracleCapExceeded, Ray, build_rays, enumerate_walls, kleiman_test, oracle_cap, wall_classes
from .relations import PrimitiveRelation, ReductionTrace, all_relations

SCHEMA = "bottkit.analysis/1"

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_MISMATCH, EXIT_CAP, EXIT_INTERNAL = range(6)


# --------------------------------------------------------------------------
# JSON codec: values as exact strings, indices as plain integers
# --------------------------------------------------------------------------

def _q(x) -> str:
    return fmt_q(x)


def _unq(s: str) -> Fraction:
    return Fraction(s)


def _qs(xs) -> list[str]:
    return [_q(x) for x in xs]


def relation_to_obj(rel: PrimitiveRelation) -> dict:
    return {
        "i": rel.i,
        "gamma": [[str(ray), _q(c)] for ray, c in rel.gamma],
        "pivots": list(rel.trace.pivots),
        "a_table": [[k, j, _q(v)] for (k, j), v in sorted(rel.trace.a_table.items())],
        "text": str(rel),
    }


def relation_from_obj(obj: dict) -> PrimitiveRelation:
    trace = ReductionTrace(tuple(obj["pivots"]), {(k, j): int(v) for k, j, v in obj["a_table"]})
    gamma = tuple((RayId.parse(ray), int(c)) for ray, c in obj["gamma"])
    return PrimitiveRelation(obj["i"], gamma, trace)


@dataclass
class AnalysisReport:
    matrix: BottMatrix
    rays: list[Ray]
    relations: list[PrimitiveRelation]
    mori_generators: list[CurveClass]
    nef_generators: list[PlusDivisor]
    nef_recursion: list[list[tuple[int, int]]]
    fano: FanoReport
    ray_types: list[RayType]
    oracle: dict | None = None

    def to_json_obj(self) -> dict:
        f = self.fano
        return {
            "schema": SCHEMA,
            "matrix": {"r": self.matrix.r,
                       "beta": [[i, j, _q(b)] for i, j, b in self.matrix.entries()]},
            "rays": [{"ray": str(ray.id), "coords": _qs(ray.coords)} for ray in self.rays],
            "relations": [relation_to_obj(rel) for rel in self.relations],
            "mori_generators": [_qs(c.ints) for c in self.mori_generators],
            "nef_generators": [_qs(D.g) for D in self.nef_generators],
            "nef_recursion": [[[k, _q(c)] for k, c in rec] for rec in self.nef_recursion],
            "fano": {
                "per_row": [{"i": row.i, "n1": row.n1, "n2": row.n2} for row in f.per_row],
                "degree_sums": _qs(f.degree_sums),
                "is_fano": f.is_fano,
                "is_weak_fano": f.is_weak_fano,
                "locally_rigid": f.locally_rigid,
            },
            "ray_types": [{"i": t.i, "is_extremal": t.is_extremal, "is_mori": t.is_mori,
                           "canonical_degree": _q(t.canonical_degree)} for t in self.ray_types],
            "oracle": self.oracle,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj: dict) -> AnalysisReport:
        if obj.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {obj.get('schema')!r}")
        m = obj["matrix"]
        matrix = BottMatrix.from_entries(m["r"], [(i, j, int(b)) for i, j, b in m["beta"]])
        f = obj["fano"]
        fano = FanoReport(
            tuple(RowConditions(row["i"], row["n1"], row["n2"]) for row in f["per_row"]),
            tuple(int(s) for s in f["degree_sums"]),
            f["is_fano"], f["is_weak_fano"], f["locally_rigid"])
        return cls(
            matrix=matrix,
            rays=[Ray(RayId.parse(x["ray"]), tuple(int(c) for c in x["coords"])) for x in obj["rays"]],
            relations=[relation_from_obj(x) for x in obj["relations"]],
            mori_generators=[CurveClass(tuple(_unq(s) for s in c)) for c in obj["mori_generators"]],
            nef_generators=[PlusDivisor(tuple(_unq(s) for s in g)) for g in obj["nef_generators"]],
            nef_recursion=[[(k, int(c)) for k, c in rec] for rec in obj["nef_recursion"]],
            fano=fano,
            ray_types=[RayType(t["i"], t["is_extremal"], t["is_mori"], int(t["canonical_degree"]))
                       for t in obj["ray_types"]],
            oracle=obj.get("oracle"),
        )

    @classmethod
    def from_json(cls, text: str) -> AnalysisReport:
        return cls.from_json_obj(json.loads(text))


def analyze(M: BottMatrix, with_oracle: bool = False, cap: int | None = None) -> AnalysisReport:
    relations = all_relations(M)
    report = AnalysisReport(
        matrix=M,
        rays=build_rays(M),
        relations=relations,
        mori_generators=[rel.curve_class(M.r) for rel in relations],
        nef_generators=nef_generators(M, relations),
        nef_recursion=nef_recursion(M, relations),
        fano=classify_fano(M, relations),
        ray_types=ray_types(M, relations),
    )
    if with_oracle:
        chk = oracle_cross_check(M, cap=cap)
        report.oracle = {
            "walls": chk.n_walls,
            "wall_classes": [_qs(c.ints) for c in chk.oracle_classes],
            "mismatches": chk.mismatches,
        }
    return report


# --------------------------------------------------------------------------
# Text rendering
# --------------------------------------------------------------------------

def _vec(xs) -> str:
    return "(" + ", ".join(_q(x) for x in xs) + ")"


def render_analysis(rep: AnalysisReport) -> str:
    M = rep.matrix
    out = [f"Bott tower of height r = {M.r}", "", "matrix:"]
    out += ["  " + line for line in str(M).splitlines()]
    out += ["", "rays:"]
    out += [f"  {ray.id.vector_name} = {_vec(ray.coords)}" for ray in rep.rays]
    out += ["", "primitive relations:"]
    for rel in rep.relations:
        pivots = ", ".join(map(str, rel.trace.pivots))
        out.append(f"  r(P_{rel.i}): {rel}    I_{rel.i} = {{{pivots}}}")
    out += ["", "Mori cone generators (intersection numbers with D_1+, ..., D_r+):"]
    for t, c in zip(rep.ray_types, rep.mori_generators):
        kind = "Mori ray" if t.is_mori else "extremal, not Mori"
        out.append(f"  r(P_{t.i}) = {c}    K.r(P_{t.i}) = {t.canonical_degree}    {kind}")
    out += ["", "nef cone generators (plus basis):"]
    for m, (D, rec) in enumerate(zip(rep.nef_generators, rep.nef_recursion), start=1):
        parts = [(f"{c} " if c != 1 else "") + f"D_{k}" for k, c in rec] + [f"D_{{rho_{m}^+}}"]
        out.append(f"  D_{m} = {' + '.join(parts)} = {_vec(D.g)}")
    f = rep.fano
    out += ["", f"classification: {f.label}"]
    for row, s in zip(f.per_row, f.degree_sums):
        n1 = f"N1 {row.n1}" if row.n1 else "N1 fails"
        n2 = f"N2 {row.n2}" if row.n2 else "N2 fails"
        out.append(f"  row {row.i}: {n1:<10} {n2:<12} sum c = {s}")
    out.append(f"  Fano: {f.is_fano}   weak Fano: {f.is_weak_fano}   locally rigid: {f.locally_rigid}")
    if rep.oracle is not None:
        o = rep.oracle
        out += ["", f"oracle: {o['walls']} walls, {len(o['wall_classes'])} distinct wall classes"]
        if o["mismatches"]:
            out += ["  MISMATCH: " + msg for msg in o["mismatches"]]
        else:
            out.append("  all fast-path results confirmed")
    return "\n".join(out)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _load(path: str) -> BottMatrix:
    try:
        return read_matrix(path)
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc.strerror}") from None


def _divisor_from_args(M: BottMatrix, args) -> Divisor:
    if args.divisor is not None and args.plus_divisor is not None:
        raise ValueError("give at most one of --divisor and --plus-divisor")
    if args.divisor is not None:
        return parse_divisor(M, args.divisor)
    if args.plus_divisor is not None:
        return parse_plus_divisor(M, args.plus_divisor).as_divisor()
    return Divisor.anticanonical(M.r)


def cmd_analyze(args) -> int:
    M = _load(args.matrix)
    rep = analyze(M, with_oracle=args.oracle, cap=args.oracle_cap)
    print(rep.to_json() if args.json else render_analysis(rep))
    if rep.oracle is not None and rep.oracle["mismatches"]:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_check(args) -> int:
    M = _load(args.matrix)
    D = _divisor_from_args(M, args)
    relations = all_relations(M)
    cert = relation_degrees(M, D, relations)
    result: dict[str, Any] = {"divisor": str(D), "d": _qs(cert.d), "nef": cert.is_nef, "ample": cert.is_ample}
    if args.log_fano:
        lf = log_fano_certificate(M, D, relations)
        result.update(k=_qs(lf.k), floor_ok=lf.floor_ok, log_fano=lf.is_log_fano, reason=lf.reason)
        verdict = lf.is_log_fano
    else:
        verdict = cert.is_ample if args.require_ample else cert.is_nef
    status = EXIT_OK if verdict else EXIT_FALSE
    if args.oracle:
        walls = enumerate_walls(M, args.oracle_cap)
        target = D
        if args.log_fano:
            target = Divisor.anticanonical(M.r) - D
        nef, ample, _ = kleiman_test(walls, target)
        fast = all(x < 0 for x in lf.k) if args.log_fano else cert.is_ample
        result["oracle"] = {"nef": nef, "ample": ample}
        if (not args.log_fano and nef != cert.is_nef) or fast != ample:
            status = EXIT_MISMATCH
    result["verdict"] = verdict
    if args.json:
        print(json.dumps({"schema": "bottkit.check/1", **result}, indent=2))
    else:
        print(f"divisor: {result['divisor']}")
        print(f"d = {_vec(cert.d)}")
        print(f"nef: {cert.is_nef}   ample: {cert.is_ample}")
        if args.log_fano:
            print(f"k = {_vec(lf.k)}")
            print(f"log Fano: {lf.is_log_fano}   ({lf.reason})")
        if args.oracle:
            o = result["oracle"]
            tag = "" if status != EXIT_MISMATCH else "   MISMATCH"
            print(f"oracle: nef {o['nef']}   ample {o['ample']}{tag}")
    return status


def cmd_census(args) -> int:
    res = census(args.r, args.lo, args.hi, jobs=args.jobs, samples=args.samples,
                 oracle_every=args.oracle_every, budget=args.budget)
    if args.json:
        print(json.dumps({
            "schema": "bottkit.census/1", "r": res.r, "lo": _q(res.lo), "hi": _q(res.hi),
            "total": _q(res.total), "counts": {k: _q(v) for k, v in res.counts.items()},
            "samples": {k: [m.to_json_obj() for m in v] for k, v in res.samples.items()},
            "oracle_checked": _q(res.oracle_checked), "oracle_mismatches": res.oracle_mismatches,
        }, indent=2))
    else:
        print(f"census r={res.r}, entries in [{res.lo}, {res.hi}]: {res.total} matrices")
        print(f"  Fano                 {res.counts['fano']}")
        print(f"  weak Fano, not Fano  {res.counts['weak_fano_not_fano']}")
        print(f"  neither              {res.counts['neither']}")
        for key, mats in res.samples.items():
            for m in mats:
                flat = " | ".join(" ".join(map(str, row)) for row in m.rows[:-1])
                print(f"  sample {key}: {flat}")
        if args.oracle_every:
            print(f"  oracle spot-checks: {res.oracle_checked}, mismatches: {len(res.oracle_mismatches)}")
            for msg in res.oracle_mismatches:
                print("  MISMATCH: " + msg)
    return EXIT_MISMATCH if res.oracle_mismatches else EXIT_OK


def cmd_oracle(args) -> int:
    M = _load(args.matrix)
    D = _divisor_from_args(M, args)
    walls = enumerate_walls(M, args.oracle_cap)
    classes = wall_classes(M, walls)
    nef, ample, low = kleiman_test(walls, D)
    chk = oracle_cross_check(M, [D], cap=args.oracle_cap)
    if args.json:
        print(json.dumps({
            "schema": "bottkit.oracle/1", "walls": len(walls),
            "wall_classes": [_qs(c.ints) for c in classes],
            "divisor": str(D), "nef": nef, "ample": ample, "min_degree": _q(low),
            "mismatches": chk.mismatches,
        }, indent=2))
    else:
        print(f"{len(walls)} walls, {len(classes)} distinct wall classes:")
        for c in classes:
            print(f"  {c}")
        print(f"divisor: {D}")
        print(f"nef: {nef}   ample: {ample}   min degree over walls: {_q(low)}")
        print("cross-check: " + ("ok" if chk.ok else f"{len(chk.mismatches)} mismatches"))
        for msg in chk.mismatches:
            print("  MISMATCH: " + msg)
    return EXIT_OK if chk.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bottkit", description="Exact toric geometry of Bott towers.")
    sub = p.add_subparsers(dest="command", required=True)

    def oracle_flags(sp):
        sp.add_argument("--oracle-cap", type=int, default=None,
                        help="largest r for wall enumeration (default $BOTTKIT_ORACLE_CAP or 16)")

    def divisor_flags(sp):
        sp.add_argument("--divisor", metavar="SPEC", help="e.g. '1+:1,2-:1/2' (default: -K)")
        sp.add_argument("--plus-divisor", metavar="SPEC", help="g1,...,gr in the D_{rho_j^+} basis")

    sp = sub.add_parser("analyze", help="full report for one tower")
    sp.add_argument("matrix")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--oracle", action="store_true", help="cross-check against wall enumeration")
    oracle_flags(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("check", help="nef/ample or log Fano test for one divisor")
    sp.add_argument("matrix")
    divisor_flags(sp)
    sp.add_argument("--log-fano", action="store_true")
    sp.add_argument("--require-ample", action="store_true")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--json", action="store_true")
    oracle_flags(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("census", help="classify every tower in a box of entries")
    sp.add_argument("r", type=int)
    sp.add_argument("--lo", type=int, default=-1)
    sp.add_argument("--hi", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--samples", type=int, default=0, help="sample matrices to print per class")
    sp.add_argument("--oracle-every", type=int, default=0, metavar="N",
                    help="run the wall oracle on every N-th matrix")
    sp.add_argument("--budget", type=int, default=2_000_000)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("oracle", help="brute-force wall enumeration")
    sp.add_argument("matrix")
    divisor_flags(sp)
    sp.add_argument("--json", action="store_true")
    oracle_flags(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "oracle_cap", None) is None and hasattr(args, "oracle_cap"):
        try:
            args.oracle_cap = oracle_cap()
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except MatrixFormatError as exc:
        print(f"error: {args.matrix}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleCapExceeded as exc:
        print(f"error: {exc} (raise it with --oracle-cap)", file=sys.stderr)
        return EXIT_CAP
    except (InconsistencyError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (CensusBudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
