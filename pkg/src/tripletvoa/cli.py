"""Command-line front end: ``tripletvoa {weights,zhu,char,verify,fock-eval}``."""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from fractions import Fraction

from . import chars, zhu
from .exactmath import PolyQ
from .fock import FockVector, IncompatibleModeIndex, Lattice
from .report import frac_str
from .verify import Config, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class ExprError(UsageError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


# ------------------------------------------------------------ formatting
def _poly_json(f: PolyQ) -> list[str]:
    return [frac_str(c) for c in f.coeffs]


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] for c in cols])
        return
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    out.write("  ".join(c.ljust(widths[c]) for c in cols).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(str(r[c]).ljust(widths[c]) for c in cols).rstrip() + "\n")


def _parse_range(s: str | None, default: tuple[int, int]) -> range:
    if s is None:
        return range(default[0], default[1] + 1)
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", s)
    if not m:
        raise UsageError(f"bad range {s!r}; expected 'a..b' or 'a'")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise UsageError(f"empty range {s!r}")
    return range(lo, hi + 1)


def default_max_degree(p: int) -> int:
    # exact row reduction on the degree-d piece is the cost driver
    return {2: 10, 3: 8}.get(p, 6)


# ------------------------------------------------------------ subcommands
def cmd_weights(args, out) -> int:
    p = args.p
    ms = _parse_range(args.m, (1, 3 * p - 1))
    ns = _parse_range(args.n, (1, 1))
    table = [{"m": m, "n": n, "h": frac_str(zhu.weight_h(m, n, p))} for n in ns for m in ms]
    roots: dict = {}
    for h in zhu.zhu_roots(p):
        roots[h] = roots.get(h, 0) + 1
    root_rows = [{"h": frac_str(h), "multiplicity": k} for h, k in sorted(roots.items())]
    if args.format == "json":
        out.write(json.dumps({"p": p, "central_charge": frac_str(zhu.central_charge(p)),
                              "weights": table, "zhu_roots": root_rows}, indent=2) + "\n")
    elif args.format == "csv":
        _emit_rows(table, "csv", out)
    else:
        out.write(f"p={p}  c={frac_str(zhu.central_charge(p))}\n")
        _emit_rows(table, "text", out)
        out.write("zhu roots (h_{i,1}, i=1..3p-1):\n")
        _emit_rows(root_rows, "text", out)
    return EXIT_OK


def zhu_to_dict(rep: zhu.ZhuReport) -> dict:
    d = {
        "p": rep.p,
        "f_p": _poly_json(rep.f_p),
        "q": _poly_json(rep.q),
        "P": _poly_json(rep.P),
        "C_p": frac_str(rep.C_p),
        "B_p": frac_str(rep.B_p),
        "dim_bound": rep.dim_bound,
        "dim_status": "upper bound; equality with dim A(W(p)) is not established here",
        "matrix_ideals": [
            {"weight": frac_str(m["weight"]), "index": m["index"], "generators": m["generators"]}
            for m in rep.matrix_ideals
        ],
        "two_dim_ideals": [],
        "one_dim_ideal": {"weight": frac_str(rep.one_dim_ideal["weight"]), "v_p": _poly_json(rep.one_dim_ideal["v_p"])},
        "relations_hold": rep.relations_hold,
    }
    for a in rep.two_dim_ideals:
        d["two_dim_ideals"].append({
            "i": a.i,
            "weight": frac_str(a.weight),
            "v": _poly_json(a.v),
            "w": _poly_json(a.w),
            "lambda": frac_str(a.lam),
            "nu": frac_str(a.nu),
            "status": a.status,
        })
        d[f"lambda_{a.i}"] = frac_str(a.lam)
        d[f"nu_{a.i}"] = frac_str(a.nu)
    return d


def cmd_zhu(args, out) -> int:
    rep = zhu.idempotents(args.p)
    d = zhu_to_dict(rep)
    if args.format == "json":
        out.write(json.dumps(d, indent=2) + "\n")
    elif args.format == "csv":
        rows = [{"key": k, "value": frac_str(v) if isinstance(v, Fraction) else v}
                for k, v in (("p", rep.p), ("C_p", rep.C_p), ("B_p", rep.B_p), ("dim_bound", rep.dim_bound))]
        for a in rep.two_dim_ideals:
            rows += [{"key": f"lambda_{a.i}", "value": frac_str(a.lam)}, {"key": f"nu_{a.i}", "value": frac_str(a.nu)},
                     {"key": f"status_{a.i}", "value": a.status}]
        _emit_rows(rows, "csv", out)
    else:
        out.write(f"p = {rep.p}\n")
        out.write(f"f_p(x) = {rep.f_p}\n")
        out.write(f"q(x)   = {rep.q}\n")
        out.write(f"P(x)   = {rep.P}\n")
        out.write(f"C_p = {rep.C_p}   B_p = {rep.B_p}\n")
        for m in rep.matrix_ideals:
            out.write(f"matrix ideal at h={m['weight']}: {', '.join(m['generators'])}\n")
        for a in rep.two_dim_ideals:
            out.write(f"two-dim ideal i={a.i} h={a.weight}: lambda={a.lam} nu={a.nu} [{a.status}]\n")
            out.write(f"  v_{a.i} = {a.v}\n  w_{a.i} = {a.w}\n")
        out.write(f"one-dim ideal h={rep.one_dim_ideal['weight']}: v_p = {rep.one_dim_ideal['v_p']}\n")
        out.write(f"dim bound 6p-1 = {rep.dim_bound} ({d['dim_status']})\n")
        out.write(f"idempotent relations hold: {rep.relations_hold}\n")
    return EXIT_OK if rep.relations_hold else EXIT_FAIL


_MODULE_RE = re.compile(r"(Lambda|Pi|lattice)(\d+)")


def cmd_char(args, out) -> int:
    p = args.p
    m = _MODULE_RE.fullmatch(args.module or "")
    if not m:
        raise UsageError(f"unknown module {args.module!r}; use Lambda<i>, Pi<i> or lattice<j>")
    kind, idx = m.group(1), int(m.group(2))
    if kind == "lattice":
        if not 0 <= idx <= 2 * p - 1:
            raise UsageError(f"lattice index must lie in 0..{2 * p - 1}")
        ch = chars.char_lattice_module(idx, p, args.terms)
    else:
        if not 1 <= idx <= p:
            raise UsageError(f"module index must lie in 1..{p}")
        ch = chars.char_irreducible(kind, idx, p, args.terms)
    rows = [{"exponent": frac_str(e), "coefficient": frac_str(c)} for e, c in ch.series.items()]
    if args.format == "json":
        out.write(json.dumps({"p": p, "module": ch.label, "leading_exponent": frac_str(ch.leading_exponent),
                              "order": frac_str(ch.series.order), "terms": rows}, indent=2) + "\n")
    elif args.format == "csv":
        _emit_rows(rows, "csv", out)
    else:
        out.write(f"{ch.label} (p={p}), exact below q^{ch.series.order}\n")
        for e, c in ch.series.items():
            out.write(f"  {c} q^{e}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = Config(p=args.p, max_degree=args.max_degree, series_order=args.terms, tol=args.tol,
                 seed=args.seed, only=args.only, timing=args.timing)
    rep = run_verify(cfg)
    if args.format == "json":
        out.write(rep.to_json() + "\n")
    elif args.format == "csv":
        out.write(rep.to_csv())
    else:
        out.write(rep.to_text() + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


# ------------------------------------------------------------ fock-eval
_TOKEN = re.compile(r"\s*(?:(Qt|Q)\b|([eaLEFH])\s*\(\s*([^()]*?)\s*\))")
_LIN = re.compile(r"[+-]?(?:\d+p?|p)")


def _linear_in_p(text: str, p: int, pos: int) -> int:
    s = text.replace(" ", "")
    if not s or _LIN.sub("", s):
        raise ExprError(f"bad index {text!r}", pos)
    total = 0
    for term in _LIN.findall(s):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        if body.endswith("p"):
            coef = int(body[:-1]) if body[:-1] else 1
            total += sign * coef * p
        else:
            total += sign * int(body)
    return total


def parse_fock_expr(expr: str, p: int) -> list[tuple]:
    """Tokenise into ``[(op, index, position), ...]`` in left-to-right order."""
    ops = []
    pos = 0
    while pos < len(expr):
        if expr[pos:].strip() == "":
            break
        m = _TOKEN.match(expr, pos)
        if not m:
            start = pos + (len(expr[pos:]) - len(expr[pos:].lstrip()))
            raise ExprError(f"unexpected input {expr[start:start + 8]!r}", start)
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            ops.append((m.group(1), None, start))
        else:
            ops.append((m.group(2), _linear_in_p(m.group(3), p, m.start(3)), start))
        pos = m.end()
    if not ops:
        raise ExprError("empty expression", 0)
    if ops[-1][0] != "e":
        raise ExprError("expression must end with a state e(k)", ops[-1][2])
    for op in ops[:-1]:
        if op[0] == "e":
            raise ExprError("e(k) is a state, only allowed rightmost", op[2])
    return ops


def eval_fock_expr(expr: str, p: int) -> FockVector:
    L = Lattice(p)
    ops = parse_fock_expr(expr, p)
    v = L.exp_vector(ops[-1][1])
    for op, idx, pos in reversed(ops[:-1]):
        try:
            if op == "Q":
                v = L.Q(v)
            elif op == "Qt":
                v = L.Qt(v)
            elif op == "a":
                v = L.heis_mode(idx, v)
            elif op == "L":
                v = L.virasoro_mode(idx, v)
            else:
                v = L.triplet_mode(op, idx, v)
        except IncompatibleModeIndex as e:
            raise IncompatibleModeIndex(f"{e} (operator {op} at position {pos})") from None
    return v


def cmd_fock_eval(args, out) -> int:
    p = args.p
    v = eval_fock_expr(args.expression, p)
    L = Lattice(p)
    if args.max_degree is not None and v and max(L.degrees(v)) > args.max_degree:
        raise UsageError(f"result has degree above --max-degree {args.max_degree}")
    terms = [{"partition": list(parts), "charge": m, "coefficient": frac_str(c)} for (parts, m), c in v.sorted_terms()]
    if args.format == "json":
        out.write(json.dumps({"p": p, "expression": args.expression, "terms": terms}, indent=2) + "\n")
    elif args.format == "csv":
        rows = [{"partition": " ".join(map(str, t["partition"])), "charge": t["charge"], "coefficient": t["coefficient"]}
                for t in terms]
        _emit_rows(rows, "csv", out)
    else:
        out.write(v.to_str() + "\n")
    return EXIT_OK


# ------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="lattice parameter p >= 2")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--terms", type=int, default=chars.DEFAULT_TERMS, help="series length in integer degrees")
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--only", default=None, help="glob over check ids")

    ap = argparse.ArgumentParser(prog="tripletvoa", description="Exact computations for the triplet algebra W(p).")
    sub = ap.add_subparsers(dest="command", required=True)
    w = sub.add_parser("weights", parents=[common], help="table of h_{m,n} and the Zhu roots")
    w.add_argument("--m", default=None, help="range a..b")
    w.add_argument("--n", default=None, help="range a..b")
    sub.add_parser("zhu", parents=[common], help="Zhu polynomials and idempotent decomposition")
    c = sub.add_parser("char", parents=[common], help="character q-series")
    c.add_argument("--module", required=True, help="Lambda<i>, Pi<i> or lattice<j>")
    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("--timing", action="store_true", help="record elapsed_ms (output is then not reproducible)")
    f = sub.add_parser("fock-eval", parents=[common], help="evaluate an operator expression on e(k)")
    f.add_argument("expression")
    return ap


COMMANDS = {
    "weights": cmd_weights,
    "zhu": cmd_zhu,
    "char": cmd_char,
    "verify": cmd_verify,
    "fock-eval": cmd_fock_eval,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.p < 2:
        ap.print_usage(sys.stderr)
        print(f"tripletvoa: error: --p must be >= 2 (got {args.p})", file=sys.stderr)
        return EXIT_USAGE
    if args.tol <= 0 or args.terms < 1:
        print("tripletvoa: error: --tol must be positive and --terms at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "verify" and args.max_degree is None:
        args.max_degree = default_max_degree(args.p)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, IncompatibleModeIndex) as e:
        print(f"tripletvoa: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
