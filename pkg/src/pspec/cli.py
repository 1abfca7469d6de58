"""``pspec`` command-line interface.

Usage::

    pspec bracket-table qmat.psn
    pspec classify-point qmat.psn --point 0,0,0,0
    pspec gamma qmat.psn --ideal "x1,x3"
    pspec --batch commands.txt

The structure argument is a ``.psn`` path; if no such file exists, the name of
a bundled structure (``qmat``, ``symm``, ``detprod``, ``sharedpencil``) is
accepted too.  Exit codes: 0 success, 1 negative verdict under
``--strict-exit``, 2 input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import ideals, torus
from .bracket import (
    PoissonStructure,
    StructureError,
    is_zero_bracket,
    jacobian_rank,
    jacobiator,
    plucker_minors_check,
)
from .groebner import IdealHandle, MonomialOrder
from .parse import (
    BUNDLED,
    ParseError,
    load_bundled,
    load_structure_file,
    parse_expr,
    parse_list,
    parse_rationals,
)
from .poly import DegreeLimitError

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


@dataclass
class Report:
    verb: str
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    verdict: bool | None = None


def _q(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _tuple(values) -> str:
    return "(" + ",".join(_q(v) for v in values) + ")"


def report_render(r: Report, fmt: str = "text") -> str:
    if fmt == "text":
        return "\n".join(r.lines) + "\n"
    if fmt == "structured":
        payload = {"verb": r.verb, "verdict": r.verdict, "result": r.data}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# -- verbs ---------------------------------------------------------------------


def _fmt(S: PoissonStructure, f) -> str:
    return S.format_poly(f)


def _ideal(S: PoissonStructure, text: str | None, order: MonomialOrder, flag: str = "--ideal") -> IdealHandle:
    if not text:
        raise CliInputError(f"{flag} is required")
    return IdealHandle(parse_list(text, S.names), order, S.nvars)


def _ideal_text(S: PoissonStructure, I: IdealHandle) -> str:
    return "(" + ", ".join(_fmt(S, g) for g in I.gens) + ")"


def _pencil(S: PoissonStructure, args) -> ideals.PencilSpec:
    if args.lam is None or args.mu is None:
        raise CliInputError("--lambda and --mu are required")
    try:
        return ideals.PencilSpec(tuple(parse_rationals(args.lam)), tuple(parse_rationals(args.mu)))
    except ValueError as exc:
        raise CliInputError(str(exc)) from None


def _rationals(text: str | None, flag: str, n: int) -> list:
    if not text:
        raise CliInputError(f"{flag} is required")
    values = parse_rationals(text)
    if len(values) != n:
        raise CliInputError(f"{flag} needs {n} values, got {len(values)}")
    return values


def verb_bracket_table(S, args) -> Report:
    r = Report("bracket-table")
    for (i, j), b in sorted(S.table().items()):
        key = f"{{{S.names[i - 1]},{S.names[j - 1]}}}"
        r.lines.append(f"{key} = {_fmt(S, b)}")
        r.data[key] = _fmt(S, b)
    return r


def verb_bracket(S, args) -> Report:
    if len(args.exprs) != 2:
        raise CliInputError("bracket needs exactly two expressions")
    f, g = (parse_expr(e, S.names) for e in args.exprs)
    value = S.bracket(f, g)
    key = f"{{{_fmt(S, f)},{_fmt(S, g)}}}"
    return Report("bracket", [f"{key} = {_fmt(S, value)}"], {"bracket": _fmt(S, value)})


def verb_jacobiator(S, args) -> Report:
    r = Report("jacobiator")
    if args.exprs:
        if len(args.exprs) != 3:
            raise CliInputError("jacobiator needs three expressions (or none for all generator triples)")
        triples = [tuple(parse_expr(e, S.names) for e in args.exprs)]
    else:
        xs = [S.var(i) for i in range(1, S.nvars + 1)]
        triples = list(itertools.combinations(xs, 3))
    ok = True
    values = []
    for f, g, h in triples:
        value = jacobiator(S, f, g, h)
        ok = ok and not value
        label = f"jacobiator({_fmt(S, f)},{_fmt(S, g)},{_fmt(S, h)})"
        r.lines.append(f"{label} = {_fmt(S, value)}")
        values.append({"args": [_fmt(S, f), _fmt(S, g), _fmt(S, h)], "value": _fmt(S, value)})
    r.lines.append(f"JACOBI IDENTITY: {'holds' if ok else 'fails'}")
    r.data = {"values": values, "holds": ok}
    r.verdict = ok
    return r


def verb_plucker(S, args) -> Report:
    if S.E is None:
        raise CliInputError("structure has no E matrix")
    r = Report("plucker")
    if args.exprs:
        try:
            quads = [tuple(int(e) for e in args.exprs)]
        except ValueError:
            raise CliInputError("plucker takes four integer column indices") from None
        if len(quads[0]) != 4:
            raise CliInputError("plucker takes four integer column indices")
    else:
        quads = list(itertools.combinations(range(1, S.nvars + 1), 4))
    ok = True
    for quad in quads:
        try:
            value = plucker_minors_check(S.E, *quad)
        except (ValueError, IndexError) as exc:
            raise CliInputError(str(exc)) from None
        ok = ok and not value
        label = "plucker(" + ",".join(map(str, quad)) + ")"
        r.lines.append(f"{label}={_fmt(S, value)}")
        r.data[label] = _fmt(S, value)
    r.verdict = ok
    return r


def verb_depend(S, args) -> Report:
    k = len(S.pairs)
    rank = jacobian_rank(S.fs)
    zero = is_zero_bracket(S)
    r = Report("depend", verdict=rank < k)
    r.lines = [
        f"jacobian rank = {rank} of {k}",
        f"ALGEBRAICALLY DEPENDENT: {_yes(rank < k)}",
        f"ZERO BRACKET: {_yes(zero)}",
    ]
    r.data = {"rank": rank, "count": k, "dependent": rank < k, "zero_bracket": zero}
    return r


def verb_is_poisson_ideal(S, args) -> Report:
    I = _ideal(S, args.ideal, args.order_obj)
    ok = ideals.is_poisson_ideal(S, I)
    r = Report("is-poisson-ideal", [f"POISSON IDEAL: {_yes(ok)}"], {"poisson": ok}, ok)
    if not ok:
        for g in I.gens:
            for j in range(1, S.nvars + 1):
                b = S.bracket(g, S.var(j))
                if not I.contains(b):
                    w = f"{{{_fmt(S, g)},{S.names[j - 1]}}} = {_fmt(S, b)} not in ideal"
                    r.lines.append(f"witness: {w}")
                    r.data["witness"] = w
                    return r
    return r


def verb_is_residually_null(S, args) -> Report:
    I = _ideal(S, args.ideal, args.order_obj)
    ok = ideals.is_residually_null(S, I)
    r = Report("is-residually-null", [f"RESIDUALLY NULL: {_yes(ok)}"], {"residually_null": ok}, ok)
    if not ok:
        (i, j), b = ideals.first_nonvanishing_bracket(S, I)
        w = f"{{{S.names[i - 1]},{S.names[j - 1]}}} = {_fmt(S, b)} not in ideal"
        r.lines.append(f"witness: {w}")
        r.data["witness"] = w
    return r


def verb_gamma(S, args) -> Report:
    I = _ideal(S, args.ideal, args.order_obj)
    try:
        data = ideals.gamma_of(S, I)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    r = Report("gamma", verdict=data.dense)
    members = "{" + ", ".join(_fmt(S, m) for m in data.S_gamma) + "}"
    if data.dense:
        V = "{" + ", ".join(v.format(S.names) for v in data.V_gamma) + "}"
        r.lines.append(f"gamma={data.gamma} dense; V={V}")
    else:
        V = None
        r.lines.append(f"gamma={data.gamma} not dense")
    r.lines.append(f"S={members}")
    r.data = {"gamma": str(data.gamma), "dense": data.dense, "S": members, "V": V}
    return r


def verb_pencil(S, args) -> Report:
    spec = _pencil(S, args)
    try:
        I = ideals.pencil_ideal(S, spec, args.order_obj)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    proper = I.is_proper()
    poisson = ideals.is_poisson_ideal(S, I)
    null = ideals.is_residually_null(S, I)
    r = Report("pencil", verdict=poisson)
    r.lines = [
        f"pencil ideal = {_ideal_text(S, I)}",
        f"PROPER: {_yes(proper)}",
        f"POISSON: {_yes(poisson)}",
        f"RESIDUALLY NULL: {_yes(null)}",
    ]
    r.data = {"ideal": _ideal_text(S, I), "proper": proper, "poisson": poisson, "residually_null": null}
    return r


def verb_classify_point(S, args) -> Report:
    p = _rationals(args.point, "--point", S.nvars)
    c = ideals.classify_point(S, p)
    if c.direct_verdict:
        direct = "all brackets vanish"
    else:
        (i, j), value = c.witness
        direct = f"{{{S.names[i - 1]},{S.names[j - 1]}}}(p) = {_q(value)}"
    k = S.nvars - 2
    if c.condition1 is not None:
        head = f"POISSON via condition (1), witness i={c.condition1}"
    elif c.condition2:
        head = "POISSON via condition (2), g_i algebraically dependent"
    elif c.condition3:
        head = f"POISSON via condition (3), gradient rank {c.gradient_rank} < {k}"
    else:
        head = f"NOT POISSON: no condition holds, gradient rank {c.gradient_rank}"
    r = Report("classify-point", verdict=c.final)
    r.lines = [f"{head}; direct check: {direct}"]
    if c.g:
        r.lines.append("g = (" + ", ".join(_fmt(S, g) for g in c.g) + ")")
    r.lines.append(f"CONSISTENT: {_yes(c.consistent)}")
    r.data = {
        "point": _tuple(c.point),
        "condition1": c.condition1,
        "condition2": c.condition2,
        "condition3": c.condition3,
        "gradient_rank": c.gradient_rank,
        "direct": c.direct_verdict,
        "poisson": c.final,
        "consistent": c.consistent,
        "g": [_fmt(S, g) for g in c.g],
    }
    return r


def verb_primitive(S, args) -> Report:
    spec = _pencil(S, args)
    candidate = _ideal(S, args.candidate, args.order_obj, "--candidate") if args.candidate else None
    try:
        rep = ideals.analyze_primitive_candidate(S, spec, candidate)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    r = Report("primitive", verdict=not rep.subject_residually_null)
    r.lines = [
        f"pencil ideal = {_ideal_text(S, rep.pencil)}",
        f"PROPER: {_yes(rep.pencil_proper)}",
        f"POISSON: {_yes(rep.pencil_poisson)}",
        f"RESIDUALLY NULL: {_yes(rep.pencil_residually_null)}",
    ]
    r.data = {
        "pencil": _ideal_text(S, rep.pencil),
        "pencil_proper": rep.pencil_proper,
        "pencil_poisson": rep.pencil_poisson,
        "pencil_residually_null": rep.pencil_residually_null,
        "verdict": rep.verdict,
        "not_checked": list(rep.not_checked),
    }
    if rep.candidate is not None:
        r.lines += [
            f"candidate = {_ideal_text(S, rep.candidate)}",
            f"CANDIDATE CONTAINS PENCIL: {_yes(rep.candidate_contains_pencil)}",
            f"CANDIDATE POISSON: {_yes(rep.candidate_poisson)}",
            f"CANDIDATE RESIDUALLY NULL: {_yes(rep.candidate_residually_null)}",
        ]
        r.data.update(
            candidate=_ideal_text(S, rep.candidate),
            candidate_contains_pencil=rep.candidate_contains_pencil,
            candidate_poisson=rep.candidate_poisson,
            candidate_residually_null=rep.candidate_residually_null,
        )
    r.lines.append(f"VERDICT: {rep.verdict}")
    r.lines.append("NOT CHECKED: " + ", ".join(rep.not_checked))
    return r


def verb_smooth(S, args) -> Report:
    mus = _rationals(args.mu, "--mu", S.nvars - 2)
    try:
        ok = ideals.smoothness_check(S, mus)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    r = Report("smooth", [f"SMOOTH: {_yes(ok)}"], {"smooth": ok, "mu": _tuple(mus)}, ok)
    return r


def verb_torus(S, args) -> Report:
    h = _rationals(args.h, "--h", S.nvars)
    try:
        w = torus.weight_report(S, h)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    auto = torus.poisson_auto_check(S, h)
    r = Report("torus", verdict=auto)
    if w.is_in_Hprime:
        r.lines.append(f"sigma={_tuple(w.sigma)} tau={_tuple(w.tau)}")
        crit = "true" if w.rho_criterion else "false"
        r.lines.append(f"rho={_q(w.rho)} product={_q(w.product)} criterion={crit}")
    else:
        r.lines.append("not in H': some s_i or t_i is not semi-invariant")
    r.lines.append(f"POISSON AUTOMORPHISM: {_yes(auto)}")
    r.data = {
        "in_Hprime": w.is_in_Hprime,
        "sigma": [None if v is None else _q(v) for v in w.sigma],
        "tau": [None if v is None else _q(v) for v in w.tau],
        "rho": None if w.rho is None else _q(w.rho),
        "product": _q(w.product),
        "criterion": w.rho_criterion,
        "poisson_automorphism": auto,
    }
    return r


def verb_h_check(S, args) -> Report:
    h = _rationals(args.h, "--h", S.nvars)
    try:
        ok = torus.h_group_check(S, h)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    return Report("h-check", [f"IN H: {_yes(ok)}"], {"in_H": ok, "h": _tuple(h)}, ok)


VERBS = {
    "bracket-table": verb_bracket_table,
    "bracket": verb_bracket,
    "jacobiator": verb_jacobiator,
    "plucker": verb_plucker,
    "depend": verb_depend,
    "is-poisson-ideal": verb_is_poisson_ideal,
    "is-residually-null": verb_is_residually_null,
    "gamma": verb_gamma,
    "pencil": verb_pencil,
    "classify-point": verb_classify_point,
    "primitive": verb_primitive,
    "smooth": verb_smooth,
    "torus": verb_torus,
    "h-check": verb_h_check,
}


class CliInputError(Exception):
    pass


def dispatch(verb: str, S: PoissonStructure, args) -> Report:
    try:
        handler = VERBS[verb]
    except KeyError:
        raise CliInputError(f"unknown verb {verb!r}") from None
    return handler(S, args)


# -- argument handling ---------------------------------------------------------


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors become exit code 2 through run(), not SystemExit
    def error(self, message):
        raise _ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pspec", description="Jacobian Poisson brackets and their ideals.")
    parser.add_argument("verb", nargs="?", choices=sorted(VERBS), help="analysis to run")
    parser.add_argument("structure", nargs="?", help=".psn file or bundled name " + "/".join(BUNDLED))
    parser.add_argument("exprs", nargs="*", help="verb-specific expressions or indices")
    parser.add_argument("--point")
    parser.add_argument("--ideal")
    parser.add_argument("--lambda", dest="lam")
    parser.add_argument("--mu")
    parser.add_argument("--h")
    parser.add_argument("--candidate")
    parser.add_argument("--order", choices=["lex", "grlex", "grevlex"], default="grevlex")
    parser.add_argument("--format", choices=["text", "structured"], default="text")
    parser.add_argument("--strict-exit", action="store_true")
    parser.add_argument("--batch", metavar="FILE")
    return parser


def _parse(argv) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _load(name: str) -> PoissonStructure:
    path = Path(name)
    if path.exists():
        return load_structure_file(path)
    stem = path.name[:-4] if path.name.endswith(".psn") else path.name
    if stem in BUNDLED and path.parent == Path("."):
        return load_bundled(stem)
    raise CliInputError(f"cannot read structure file {name!r}: no such file")


def run(argv) -> tuple:
    """Execute one command line; returns ``(exit_code, stdout_text, stderr_text)``."""
    try:
        args = _parse(argv)
    except _ArgumentError as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    if args.batch:
        return _run_batch(args.batch)
    if not args.verb or not args.structure:
        return EXIT_INPUT, "", "error: a verb and a structure file are required\n"
    try:
        S = _load(args.structure)
        args.order_obj = MonomialOrder(args.order)
        report = dispatch(args.verb, S, args)
    except ParseError as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    except (CliInputError, StructureError, OSError, DegreeLimitError) as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    out = report_render(report, args.format)
    code = EXIT_OK
    if args.strict_exit and report.verdict is False:
        code = EXIT_NEGATIVE
    return code, out, ""


def _run_batch(path: str) -> tuple:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    commands = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            commands.append(line)
    for line in commands:
        if "--batch" in shlex.split(line):
            return EXIT_INPUT, "", "error: nested --batch is not allowed\n"
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda line: run(shlex.split(line)), commands))
    out = []
    err = []
    code = EXIT_OK
    for line, (c, o, e) in zip(commands, results):
        out.append(f"== {line}\n{o}")
        err.append(e)
        code = max(code, c)
    return code, "".join(out), "".join(err)


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
