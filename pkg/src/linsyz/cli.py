"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 malformed input or guard
violation.  Error messages carry a prefix naming their kind
(``error: parse:``, ``error: input:``, ``error: guard:``).
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import DEFAULT_PRIME, GREVLEX, LEX, ParseError, Poly, Ring, field_from_spec, format_poly
from .curves import (CLAUSES, NAMED_VARS_D2, DoublingSpec, display_generators, expected_betti,
                     ferrand_double_ideal, koszul_nonvanishing, linear_embed, points_ideal, points_scheme_ideal,
                     random_points, rnc_ideal, veronese_ideal, verify_double_curve)
from .groebner import NotHomogeneousError
from .plethysm import (Decomp, PlethysmError, exterior_oracle, lambda_sym_dim2, sym_sym_dim, sym_sym_dim2,
                       sym_sym_oracle, sym_sym_recurrence)
from .resolve import ResPoly, betti, hilbert, min_resolution, res_poly, res_poly_mul

COMMANDS = ("resolve", "hilbert", "rnc", "double", "veronese", "verify-double", "verify-rnc",
            "verify-lemma1", "verify-castelnuovo", "plethysm", "plethysm-verify")


class InputError(ValueError):
    pass


class GuardError(ValueError):
    pass


@dataclass
class JobSpec:
    command: str
    params: dict = field(default_factory=dict)
    char: int = DEFAULT_PRIME  # 0 selects the rationals
    order: str = "grevlex"
    output: str = "text"
    seed: int = 0


@dataclass
class Result:
    status: int
    out: str
    err: str = ""


# ---------------------------------------------------------------------------
# ideal text format


def parse_ideal(text: str, field=None, order: str = "grevlex", graded: bool = False) -> list[Poly]:
    """``vars: x, y, z`` then one polynomial per line; blank lines and ``#`` comments are skipped."""
    return parse_ideal_ring(text, field, order, graded)[1]


def parse_ideal_ring(text: str, field=None, order: str = "grevlex", graded: bool = False
                     ) -> tuple[Ring, list[Poly]]:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].lower().startswith("vars:"):
        raise ParseError("first line must be 'vars: x, y, ...'")
    names = [v.strip() for v in lines[0].split(":", 1)[1].replace(",", " ").split()]
    if not names:
        raise ParseError("no variables declared")
    for v in names:
        if not v.isidentifier():
            raise ParseError(f"bad variable name {v!r}")
    ring = Ring(names, field, LEX if order == "lex" else GREVLEX)
    gens = [ring.parse(ln) for ln in lines[1:]]
    if graded:
        for g in gens:
            if not g.is_homogeneous():
                raise NotHomogeneousError(f"inhomogeneous polynomial {g}")
    return ring, gens


def format_ideal(gens: Sequence[Poly], ring: Ring | None = None) -> str:
    ring = ring or gens[0].ring
    return "\n".join(["vars: " + ", ".join(ring.names), *[format_poly(g) for g in gens]]) + "\n"


def _ideal_ring(text: str, job: JobSpec) -> tuple[Ring, list[Poly]]:
    return parse_ideal_ring(text, field_from_spec(job.char), job.order, job.params.get("graded", False))


# ---------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _cmd_resolve(job: JobSpec) -> Result:
    text = job.params.get("text")
    if text is None:
        text = _read(job.params["file"])
    gens = [g for g in _ideal_ring(text, job)[1] if g]
    if not gens:
        raise InputError("zero ideal has the trivial resolution")
    res = min_resolution(gens, job.params.get("max_length"))
    table = betti(res)
    if job.output == "json":
        data = table.to_json()
        if res.truncated:
            data["truncated"] = True
        return Result(0, json.dumps(data))
    out = table.to_text()
    if res.truncated:
        out += f"\n(truncated at length {job.params.get('max_length')})"
    return Result(0, out)


def _fraction_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _cmd_hilbert(job: JobSpec) -> Result:
    text = job.params.get("text")
    if text is None:
        text = _read(job.params["file"])
    ring, gens = _ideal_ring(text, job)
    hd = hilbert(gens, ring)
    if job.output == "json":
        return Result(0, json.dumps({
            "numerator": hd.numerator, "var_count": hd.var_count, "dimension": hd.dimension,
            "h_vector": hd.h_vector, "hilbert_polynomial": [_fraction_str(c) for c in hd.hilbert_polynomial]}))
    lines = [f"numerator: {' '.join(str(c) for c in hd.numerator)}",
             f"h-vector: {' '.join(str(c) for c in hd.h_vector)}",
             f"dimension: {hd.dimension}",
             f"H(t) = {hd.hp_string()}"]
    return Result(0, "\n".join(lines))


def _gens_out(job: JobSpec, gens: Sequence[Poly], names=None) -> Result:
    lines = display_generators(gens, names)
    if job.output == "json":
        ring = gens[0].ring if gens else None
        return Result(0, json.dumps({"vars": list(names or (ring.names if ring else [])), "generators": lines}))
    return Result(0, "\n".join(lines))


def _cmd_rnc(job: JobSpec) -> Result:
    d = job.params["d"]
    if d < 1:
        raise InputError("d must be at least 1")
    gens = rnc_ideal(d, field_from_spec(job.char))
    return _gens_out(job, gens)


def _parse_matrix(text: str | None, d: int):
    if text is None:
        return None
    try:
        rows = [[Fraction(x) for x in r.replace(",", " ").split()] for r in text.split(";")]
    except ValueError:
        raise InputError(f"bad matrix {text!r}") from None
    if len(rows) != d or any(len(r) != d for r in rows):
        raise InputError(f"matrix must be {d}x{d}")
    return rows


def _cmd_double(job: JobSpec) -> Result:
    d = job.params["d"]
    if not 1 <= d <= 6:
        raise GuardError("double needs 1 <= d <= 6")
    mat = _parse_matrix(job.params.get("matrix"), d)
    gens = ferrand_double_ideal(DoublingSpec(d, basis_matrix=mat), field_from_spec(job.char))
    names = NAMED_VARS_D2 if d == 2 and not job.params.get("plain_names") else None
    return _gens_out(job, gens, names)


def _cmd_veronese(job: JobSpec) -> Result:
    try:
        gens = veronese_ideal(job.params["n"], job.params["d"], field_from_spec(job.char))
    except ValueError as exc:
        raise GuardError(str(exc)) from None
    return _gens_out(job, gens)


def _report(title: str, checks: list[tuple[str, bool]], extra: dict | None, job: JobSpec) -> Result:
    ok = all(v for _, v in checks)
    if job.output == "json":
        data = {"check": title, "ok": ok, "clauses": [{"name": n, "ok": v} for n, v in checks]}
        if extra:
            data.update(extra)
        return Result(0 if ok else 1, json.dumps(data))
    lines = [f"{title}: {'PASS' if ok else 'FAIL'}"]
    lines += [f"  [{'ok' if v else 'FAIL'}] {n}" for n, v in checks]
    return Result(0 if ok else 1, "\n".join(lines))


def _cmd_verify_double(job: JobSpec) -> Result:
    d = job.params["d"]
    if not 1 <= d <= 4:
        raise GuardError("verify-double needs 1 <= d <= 4")
    mat = _parse_matrix(job.params.get("matrix"), d)
    rep = verify_double_curve(d, field_from_spec(job.char), mat)
    checks = [(f"({k}) {CLAUSES[k]}", v) for k, v in rep.clauses.items()]
    extra = {"d": d, "betti": rep.betti.to_json() if rep.betti else None}
    res = _report(f"double curve d={d}", checks, extra, job)
    if job.output == "text" and rep.betti is not None:
        res.out += "\n" + rep.betti.to_text()
    return res


def _cmd_verify_rnc(job: JobSpec) -> Result:
    lo, hi = job.params.get("d_min", 2), job.params.get("d_max", 6)
    if lo < 1 or hi > 10 or lo > hi:
        raise GuardError("verify-rnc needs 1 <= d_min <= d_max <= 10")
    checks = []
    fld = field_from_spec(job.char)
    for d in range(lo, hi + 1):
        gens = rnc_ideal(d, fld)
        table = betti(min_resolution(gens)) if gens else expected_betti(("rnc", d))
        checks.append((f"rational normal curve d={d}", table == expected_betti(("rnc", d))))
    return _report("rational normal curves", checks, None, job)


def reembedding_corpus(field=None) -> dict[str, list[Poly]]:
    R5 = Ring(("x", "y", "z", "u", "v"), field)
    x, y, z, u, v = R5.gens()
    return {
        "conic": rnc_ideal(2, field),
        "twisted cubic": rnc_ideal(3, field),
        "rnc4": rnc_ideal(4, field),
        "double d=2": [x * z - y ** 2, x * u - y * v, y * u - z * v, u ** 2, u * v, v ** 2],
    }


def _cmd_verify_reembedding(job: JobSpec) -> Result:
    checks = []
    for name, gens in reembedding_corpus(field_from_spec(job.char)).items():
        base = res_poly(betti(min_resolution(gens)))
        for m in (1, 2, 3):
            emb = res_poly(betti(min_resolution(linear_embed(gens, m))))
            checks.append((f"{name}, m={m}", emb == res_poly_mul(base, ResPoly.one_plus_xt(m))))
    return _report("linear re-embedding product law", checks, None, job)


def castelnuovo_instances(seed: int, field=None):
    """(points on the d=2 doubling, 9 random points of P^4)."""
    on_curve = points_scheme_ideal(2, [(1, 1), (1, -1)], [(1, 0), (0, 1), (1, 2), (2, 1)], field)
    general = points_ideal(random_points(9, 4, seed), None, field)
    return on_curve, general


def _cmd_verify_castelnuovo(job: JobSpec) -> Result:
    fld = field_from_spec(job.char)
    on_curve, general = castelnuovo_instances(job.seed, fld)
    h_on, h_gen = hilbert(on_curve), hilbert(general)
    checks = [
        ("4 double + 2 simple points on the doubling have length 10", h_on.hilbert_polynomial == [Fraction(10)]),
        ("beta_{3,4} != 0 for points on the doubling", koszul_nonvanishing(on_curve, 3)),
        ("9 random points have length 9", h_gen.hilbert_polynomial == [Fraction(9)]),
        ("beta_{3,4} == 0 for 9 random points", not koszul_nonvanishing(general, 3)),
    ]
    return _report(f"strong Castelnuovo instance (seed {job.seed})", checks, None, job)


def _plethysm(dim: int, t: int, d: int, use_oracle: bool, wedge: bool) -> Decomp:
    if t < 0 or d < 0:
        raise InputError("t and d must be non-negative")
    if wedge:
        if dim != 2:
            raise InputError("--wedge is only available for dim 2")
        return lambda_sym_dim2(t, d)
    if use_oracle:
        return sym_sym_oracle(t, d, dim)
    if dim == 2:
        return sym_sym_dim2(t, d)
    table = {(3, 2): "II", (3, 3): "III", (4, 2): "IV"}
    if (dim, d) in table:
        return sym_sym_recurrence(t, table[(dim, d)])
    return sym_sym_oracle(t, d, dim)


def _cmd_plethysm(job: JobSpec) -> Result:
    p = job.params
    dim, t, d = p["dim"], p["t"], p["d"]
    if not 1 <= dim <= 4:
        raise GuardError("dim must be between 1 and 4")
    if p.get("oracle") or (dim, d) not in ((2, d), (3, 2), (3, 3), (4, 2)):
        if sym_sym_dim(t, d, dim) > 10 ** 6:
            raise GuardError("dim S^t(S^d V) exceeds 10^6")
    dec = _plethysm(dim, t, d, p.get("oracle", False), p.get("wedge", False))
    if p.get("sl"):
        dec = dec.sl_reduced()
    if job.output == "json":
        return Result(0, dec.dumps())
    return Result(0, str(dec))


def oracle_cases():
    cases = [(t, d, 2) for t in range(7) for d in range(7)]
    cases += [(t, 2, 3) for t in range(6)]
    cases += [(t, 3, 3) for t in range(5)]
    cases += [(t, 2, 4) for t in range(7)]
    return cases


def _cmd_plethysm_verify(job: JobSpec) -> Result:
    checks = []
    for t, d, dim in oracle_cases():
        rec = _plethysm(dim, t, d, False, False)
        orc = sym_sym_oracle(t, d, dim)
        if dim == 2:
            orc = orc.sl_reduced()
        # SL reduction keeps dimensions, so conservation is checked at every dim
        target = sym_sym_dim(t, d, dim)
        dim_ok = orc.dimension() == target and rec.dimension() == target
        checks.append((f"S^{t}(S^{d}) dim {dim}", rec == orc and dim_ok))
    for m in range(0, 6):
        for n in range(max(0, m - 1), 6):
            lhs = lambda_sym_dim2(m, n)
            checks.append((f"wedge^{m}(S^{n}) dim 2", lhs == exterior_oracle(m, n, 2).sl_reduced()))
    return _report("plethysm recurrences against the character oracle", checks, None, job)


HANDLERS = {
    "resolve": _cmd_resolve, "hilbert": _cmd_hilbert, "rnc": _cmd_rnc, "double": _cmd_double,
    "veronese": _cmd_veronese, "verify-double": _cmd_verify_double, "verify-rnc": _cmd_verify_rnc,
    "verify-lemma1": _cmd_verify_reembedding, "verify-castelnuovo": _cmd_verify_castelnuovo,
    "plethysm": _cmd_plethysm, "plethysm-verify": _cmd_plethysm_verify,
}


def run(job: JobSpec) -> Result:
    handler = HANDLERS.get(job.command)
    if handler is None:
        return Result(2, "", f"error: usage: unknown command {job.command!r}")
    try:
        return handler(job)
    except (ParseError, OverflowError) as exc:
        return Result(2, "", f"error: parse: {exc}")
    except NotHomogeneousError as exc:
        return Result(2, "", f"error: input: {exc}")
    except GuardError as exc:
        return Result(2, "", f"error: guard: {exc}")
    except (InputError, ValueError) as exc:
        return Result(2, "", f"error: input: {exc}")
    except PlethysmError as exc:
        return Result(1, "", f"error: verification: {exc}")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fgroup = common.add_mutually_exclusive_group()
    fgroup.add_argument("--char", type=int, default=DEFAULT_PRIME, help="prime characteristic (default 32003)")
    fgroup.add_argument("--rationals", action="store_true", help="work over Q")
    common.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized instances")

    ap = argparse.ArgumentParser(prog="linsyz", description="Gröbner bases, resolutions, doubled curves, plethysm.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", parents=[common], help="Betti table of an ideal file")
    p.add_argument("file", help="ideal file ('-' for stdin)")
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--graded", action="store_true", help="reject inhomogeneous input while parsing")

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert series and polynomial of an ideal file")
    p.add_argument("file")
    p.add_argument("--graded", action="store_true")

    p = sub.add_parser("rnc", parents=[common], help="ideal of the rational normal curve")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("double", parents=[common], help="ideal of the doubled rational normal curve")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--matrix", help="basis matrix as 'a b; c d'")
    p.add_argument("--plain-names", action="store_true", help="always use z0, z1, ... as variable names")

    p = sub.add_parser("veronese", parents=[common], help="ideal of a Veronese variety")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("verify-double", parents=[common], help="end-to-end check of a doubled curve")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--matrix")

    p = sub.add_parser("verify-rnc", parents=[common], help="Betti tables of rational normal curves")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=6)

    sub.add_parser("verify-lemma1", parents=[common], help="Betti polynomials under linear re-embedding")
    sub.add_parser("verify-castelnuovo", parents=[common], help="points on a doubled curve vs general points")

    p = sub.add_parser("plethysm", parents=[common], help="decompose S^t(S^d V)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="use the character oracle")
    p.add_argument("--sl", action="store_true", help="strip determinant twists")
    p.add_argument("--wedge", action="store_true", help="exterior power instead (dim 2)")

    sub.add_parser("plethysm-verify", parents=[common], help="recurrences against the oracle")

    p = sub.add_parser("batch", help="run one command per line of a file")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1)
    return ap


def job_from_args(args: argparse.Namespace) -> JobSpec:
    skip = {"command", "char", "rationals", "order", "json", "seed"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    return JobSpec(
        command=args.command,
        params=params,
        char=0 if args.rationals else args.char,
        order=args.order,
        output="json" if args.json else "text",
        seed=args.seed,
    )


def _run_line(line: str) -> Result:
    try:
        args = build_parser().parse_args(shlex.split(line))
    except SystemExit:
        return Result(2, "", f"error: usage: cannot parse {line!r}")
    if args.command == "batch":
        return Result(2, "", "error: usage: nested batch")
    return run(job_from_args(args))


def run_batch(path: str, jobs: int) -> int:
    lines = [ln.strip() for ln in _read(path).splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_line, lines))
    else:
        results = [_run_line(ln) for ln in lines]
    status = 0
    for ln, res in zip(lines, results):
        print(f"$ {ln}")
        if res.out:
            print(res.out)
        if res.err:
            print(res.err, file=sys.stderr)
        status = max(status, res.status)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "batch":
        try:
            return run_batch(args.file, args.jobs)
        except InputError as exc:
            print(f"error: input: {exc}", file=sys.stderr)
            return 2
    try:
        field_from_spec(0 if args.rationals else args.char)
    except ValueError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 2
    res = run(job_from_args(args))
    if res.out:
        print(res.out)
    if res.err:
        print(res.err, file=sys.stderr)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
