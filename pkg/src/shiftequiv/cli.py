"""Command-line front end: ``python -m shiftequiv <command> ...``.

Every command prints one JSON object (or ``key: value`` lines with
``--format text``) and exits with

* 0: affirmative answer or witness found,
* 1: negative answer or refutation,
* 2: unknown, a search bound was exhausted,
* 64: usage error, 65: malformed input.

Matrices are given inline (``--A "1,1;1,1"``) or via ``--input`` files in
the graph format (``vertices N`` / ``edge s t``), the adjacency format
(``matrix N`` then N rows) or as a JSON array of rows.  Witness and
homomorphism files are JSON objects.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import bimodule, dimgroup, graph, shift
from .dimgroup import DeltaElement, DimClass, as_essential
from .exceptions import NotAHomomorphismError, ParseError
from .linalg import Matrix
from .report import Report

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# input parsing

def parse_matrix(text: str) -> Matrix:
    """``"1,1;1,1"`` -> 2x2 matrix; rows split on ``;``, entries on ``,`` or spaces."""
    try:
        rows = [[int(x) for x in r.replace(",", " ").split()] for r in text.split(";")]
        return Matrix(rows)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad matrix {text!r}: {exc}") from exc


def parse_vector(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}") from exc


def read_matrix_file(path: str) -> Matrix:
    text = _read(path)
    if text.lstrip().startswith("["):
        return _matrix_from_json(json.loads(text), path)
    return graph.adjacency(graph.parse_graph(text))


def read_json(path: str) -> dict:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return data


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _matrix_from_json(rows, what) -> Matrix:
    if not (isinstance(rows, list) and rows and all(isinstance(r, list) for r in rows)):
        raise ParseError(f"{what}: expected a nonempty list of integer rows")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r):
        raise ParseError(f"{what}: entries must be integers")
    return Matrix(rows)


def _field(data: dict, key: str, where: str):
    if key not in data:
        raise ParseError(f"{where}: missing field {key!r}")
    return data[key]


def _json_matrix(data, key, where) -> Matrix:
    return _matrix_from_json(_field(data, key, where), f"{where}: {key}")


def _json_int(data, key, where) -> int:
    x = _field(data, key, where)
    if not isinstance(x, int) or isinstance(x, bool):
        raise ParseError(f"{where}: {key} must be an integer")
    return x


def _matrices(args, names) -> list:
    """Matrices named ``names`` from inline flags, falling back to ``--input`` files in order."""
    files = list(args.input or [])
    out = []
    for name in names:
        inline = getattr(args, name, None)
        if inline is not None:
            out.append(parse_matrix(inline))
        elif files:
            out.append(read_matrix_file(files.pop(0)))
        else:
            raise UsageError(f"missing matrix {name}: pass --{name} or --input")
    return out


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


def _need_input(args, where) -> str:
    if not args.input:
        raise UsageError(f"{where} needs --input <file>")
    return args.input[0]


# --------------------------------------------------------------------------
# output

def to_jsonable(x):
    if isinstance(x, Matrix):
        return [[to_jsonable(e) for e in r] for r in x.rows]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, DimClass):
        return {"v": to_jsonable(x.v), "k": x.k}
    if isinstance(x, DeltaElement):
        return {"v": to_jsonable(x.v), "l": x.l}
    if isinstance(x, Report):
        return x.to_dict()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(e) for e in x]
    if isinstance(x, float):
        return round(x, 6)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def render(result: dict, fmt: str) -> str:
    data = to_jsonable(result)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    return "\n".join(f"{k}: {json.dumps(data[k], sort_keys=True)}" for k in sorted(data))


# --------------------------------------------------------------------------
# commands; each returns (exit code, result dict)

def cmd_dimgroup(args):
    (A,) = _matrices(args, ["A"])
    A = as_essential(A)
    space = dimgroup.eventual_image(A)
    u = dimgroup.delta_order_unit(A)
    return EXIT_YES, {
        "verdict": "ok",
        "A": A,
        "generators": [dimgroup.generator_class(A, i) for i in range(A.size)],
        "order_unit": dimgroup.order_unit(A),
        "delta_basis": space.basis,
        "stabilization_power": space.stabilization_power,
        "delta_order_unit": u,
        "psi_delta_order_unit": dimgroup.psi(u),
    }


def _class(args, A, vname, kname) -> DimClass:
    return DimClass(parse_vector(_need(args, vname)), getattr(args, kname) or 0, A)


def cmd_eq(args):
    (A,) = _matrices(args, ["A"])
    a = _class(args, A, "v", "k")
    b = _class(args, A, "w", "l")
    same = dimgroup.equal(a, b)
    return (EXIT_YES if same else EXIT_NO), {"verdict": "equal" if same else "not_equal",
                                             "a": a, "b": b}


def cmd_cone(args):
    (A,) = _matrices(args, ["A"])
    a = _class(args, A, "v", "k")
    res = dimgroup.in_positive_cone(a, args.bound)
    if isinstance(res, dimgroup.InCone):
        return EXIT_YES, {"verdict": res.verdict, "power": res.power, "a": a}
    return EXIT_UNKNOWN, {"verdict": res.verdict, "bound": res.bound, "a": a}


def _witness(data, where, relaxed=False):
    A, B = _json_matrix(data, "A", where), _json_matrix(data, "B", where)
    R, S = _json_matrix(data, "R", where), _json_matrix(data, "S", where)
    m = _json_int(data, "m", where)
    if relaxed:
        return shift.RelaxedSEWitness(A, B, R, S, _json_matrix(data, "T", where), m,
                                      _json_int(data, "k", where))
    return shift.SEWitness(A, B, R, S, m)


def _report_result(report: Report, **extra):
    code = EXIT_YES if report.ok else EXIT_NO
    return code, {"verdict": "verified" if report.ok else "refuted", "report": report, **extra}


def cmd_se(args):
    if args.action == "search":
        A, B = _matrices(args, ["A", "B"])
        w = shift.search_se(A, B, args.m_max, args.coeff_bound, jobs=args.jobs)
        if w is None:
            return EXIT_UNKNOWN, {"verdict": "not_found_within_bounds",
                                  "m_max": args.m_max, "coeff_bound": args.coeff_bound}
        return EXIT_YES, {"verdict": "found", "witness": _witness_dict(w),
                          "report": shift.verify_se(w),
                          "R_unital": shift.verify_unital(w.R, w.A, w.B)}
    path = _need_input(args, f"se {args.action}")
    data = read_json(path)
    if args.action == "verify":
        return _report_result(shift.verify_se(_witness(data, path)))
    return _report_result(shift.verify_relaxed_se(_witness(data, path, relaxed=True)))


def _witness_dict(w) -> dict:
    return {"A": w.A, "B": w.B, "R": w.R, "S": w.S, "m": w.m}


def cmd_sse(args):
    path = _need_input(args, "sse verify")
    data = read_json(path)
    raw = _field(data, "steps", path)
    if not isinstance(raw, list):
        raise ParseError(f"{path}: steps must be a list")
    steps = []
    for i, st in enumerate(raw):
        where = f"{path}: step {i}"
        if not isinstance(st, dict):
            raise ParseError(f"{where}: expected an object")
        steps.append(shift.SSEStep(*(_json_matrix(st, key, where) for key in "ABRS")))
    try:
        ok = shift.verify_sse_chain(steps)
    except ValueError as exc:
        return EXIT_NO, {"verdict": "refuted", "detail": str(exc)}
    result = {"verdict": "verified" if ok else "refuted", "steps": len(steps)}
    if ok and steps:
        result["se_witness"] = _witness_dict(shift.sse_to_se(steps))
    return (EXIT_YES if ok else EXIT_NO), result


def cmd_unital(args):
    A, B, R = _matrices(args, ["A", "B", "R"])
    ok = shift.verify_unital(R, A, B)
    return (EXIT_YES if ok else EXIT_NO), {"verdict": "unital" if ok else "not_unital"}


def cmd_lift(args):
    path = _need_input(args, "lift")
    data = read_json(path)
    A, B = _json_matrix(data, "A", path), _json_matrix(data, "B", path)
    images = _field(data, "images", path)
    if not isinstance(images, list):
        raise ParseError(f"{path}: images must be a list")
    imgs = []
    for i, img in enumerate(images):
        where = f"{path}: image {i}"
        if not isinstance(img, dict):
            raise ParseError(f"{where}: expected an object with v and l")
        v = _field(img, "v", where)
        if not (isinstance(v, list) and all(isinstance(x, int) for x in v)):
            raise ParseError(f"{where}: v must be a list of integers")
        imgs.append((tuple(v), _json_int(img, "l", where)))
    spec = shift.GradedHomSpec(A, B, tuple(imgs))
    try:
        lift = shift.lift_hom_to_matrix(spec)
    except NotAHomomorphismError as exc:
        return EXIT_NO, {"verdict": "not_a_homomorphism", "detail": str(exc)}
    return EXIT_YES, {"verdict": "lifted", "R": lift.R, "shift": lift.shift}


def cmd_bridge(args):
    A, B, R = _matrices(args, ["A", "B", "R"])
    act = bimodule.bridging_K0_action(R, A, B)
    gens = []
    for v in range(act.A.nrows):
        gens.append({"vertex": v,
                     "terms": [[w, c] for w, c in sorted(act.terms(v).items())],
                     "class": act(v)})
    return EXIT_YES, {"verdict": "ok", "generators": gens}


def _pairing(raw, where):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: pairing must map 'v,w' to a permutation list")
    out = {}
    for key, perm in raw.items():
        try:
            v, w = (int(x) for x in key.split(","))
        except ValueError as exc:
            raise ParseError(f"{where}: bad block key {key!r}") from exc
        out[(v, w)] = perm
    return out


def _module_data(path):
    data = read_json(path)
    A, B = _json_matrix(data, "A", path), _json_matrix(data, "B", path)
    R, S = _json_matrix(data, "R", path), _json_matrix(data, "S", path)
    m = _json_int(data, "m", path)
    pairings = data.get("pairings", {}) or {}
    kwargs = {f"{name}_pairing": _pairing(pairings.get(name), f"{path}: {name}")
              for name in ("sigma_G", "sigma_H", "omega_E", "omega_F")}
    return R, S, bimodule.lex_module_se(A, B, R, S, m, **kwargs)


def cmd_module_se(args):
    R, S, data = _module_data(_need_input(args, "module-se verify"))
    return _report_result(bimodule.verify_module_se(data))


def cmd_aligned(args):
    R, S, data = _module_data(_need_input(args, "aligned verify"))
    if args.unital:
        return _report_result(bimodule.verify_unitally_aligned(R, S, data))
    return _report_result(bimodule.verify_aligned(data))


def cmd_splice(args):
    (A,) = _matrices(args, ["A"])
    B = graph.cuntz_splice(A, args.vertex)
    return EXIT_YES, {"verdict": "ok", "B": B}


def cmd_obstruct(args):
    A, B = _matrices(args, ["A", "B"])
    res = graph.unital_hom_obstruction(A, B)
    result = {"verdict": res.verdict, "intertwiner_basis": list(res.intertwiner_basis)}
    if isinstance(res, graph.NoUnitalHom):
        return EXIT_NO, result
    result["candidate"] = res.R
    return EXIT_YES, result


def cmd_zmod(args):
    if args.action == "eq":
        (A,) = _matrices(args, ["A"])
        m = _need(args, "m")
        a = graph.ZModClass(parse_vector(_need(args, "v")), args.k or 0, m, A)
        b = graph.ZModClass(parse_vector(_need(args, "w")), args.l or 0, m, A)
        res = graph.zmod_equal(a, b, args.bound)
        if isinstance(res, graph.Equal):
            return EXIT_YES, {"verdict": res.verdict, "p": res.p, "q": res.q}
        return EXIT_UNKNOWN, {"verdict": res.verdict, "bound": res.bound}
    A, B, R = _matrices(args, ["A", "B", "R"])
    if args.k is None:
        k = graph.zmod_intertwiner_search(R, A, B, _need(args, "m"), args.bound)
        if k is None:
            return EXIT_UNKNOWN, {"verdict": "not_found_within_bounds"}
        return EXIT_YES, {"verdict": "holds", "k": k}
    ok = graph.zmod_intertwiner_check(R, A, B, _need(args, "m"), args.k)
    return (EXIT_YES if ok else EXIT_NO), {"verdict": "holds" if ok else "fails"}


# --------------------------------------------------------------------------
# argument parsing

def _common(p, *, matrices=(), classes=False):
    p.add_argument("--input", action="append", metavar="FILE",
                   help="input file; repeat for several matrices")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the output")
    for name in matrices:
        p.add_argument(f"--{name}", metavar="ROWS", help=f'matrix {name}, e.g. "1,1;1,1"')
    if classes:
        p.add_argument("--v", help="vector, e.g. 1,0")
        p.add_argument("--k", type=int, help="level of v")
        p.add_argument("--w", help="second vector")
        p.add_argument("--l", type=int, help="level of w")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shiftequiv", description="Shift equivalence and dimension group toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dimgroup", help="dimension group data of A")
    _common(p, matrices=("A",))
    p.set_defaults(func=cmd_dimgroup)

    p = sub.add_parser("eq", help="equality of [v,k] and [w,l]")
    _common(p, matrices=("A",), classes=True)
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("cone", help="bounded positive cone test of [v,k]")
    _common(p, matrices=("A",), classes=True)
    p.add_argument("--bound", type=int, help="largest power of A^t tried (default 50|A|)")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("se", help="shift equivalence witnesses")
    p.add_argument("action", choices=("verify", "search", "relaxed"))
    _common(p, matrices=("A", "B"))
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--coeff-bound", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_se)

    p = sub.add_parser("sse", help="strong shift equivalence chains")
    p.add_argument("action", choices=("verify",))
    _common(p)
    p.set_defaults(func=cmd_sse)

    p = sub.add_parser("unital", help="does R preserve order units")
    _common(p, matrices=("A", "B", "R"))
    p.set_defaults(func=cmd_unital)

    p = sub.add_parser("lift", help="lift a homomorphism given by generator images to (R, r)")
    _common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("bridge", help="K_0 action of the bridging bimodule of R")
    _common(p, matrices=("A", "B", "R"))
    p.set_defaults(func=cmd_bridge)

    p = sub.add_parser("module-se", help="module shift equivalence from lex pairings")
    p.add_argument("action", choices=("verify",))
    _common(p)
    p.set_defaults(func=cmd_module_se)

    p = sub.add_parser("aligned", help="aligned module shift equivalence")
    p.add_argument("action", choices=("verify",))
    _common(p)
    p.add_argument("--unital", action="store_true", help="also require R or S to be unital")
    p.set_defaults(func=cmd_aligned)

    p = sub.add_parser("splice", help="Cuntz splice at a vertex with a loop")
    _common(p, matrices=("A",))
    p.add_argument("--vertex", type=int, default=0)
    p.set_defaults(func=cmd_splice)

    p = sub.add_parser("obstruct", help="rule out unital graded homomorphisms")
    _common(p, matrices=("A", "B"))
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("zmod", help="Z/mZ-graded variant")
    p.add_argument("action", choices=("eq", "check"))
    _common(p, matrices=("A", "B", "R"), classes=True)
    p.add_argument("--m", type=int, help="modulus")
    p.add_argument("--bound", type=int, help="search bound for p, q or k (default 2(|A|+m))")
    p.set_defaults(func=cmd_zmod)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command and print its result; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        start = time.perf_counter()
        code, result = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ValueError, ParseError, IndexError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_DATA
    result = {"command": argv, **result}
    if args.timing:
        result["seconds"] = time.perf_counter() - start
    print(render(result, args.format), file=stdout)
    return code


def main() -> None:
    sys.exit(run())
