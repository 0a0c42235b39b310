"""``cesaro-ri``: command-line access to the operators, norms and certificates.

Exit status: 0 for a Finite result or a passing check, 2 for Divergent or a
failing check, 3 for an undecided result, 1 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import certificates as cert
from .codec import (CodecError, decode_function, decode_phi, decode_space, encode_function,
                    parse_json)
from .cesaro import cesaro, copson, is_divergent
from .fncore.extreal import Divergent, ExtReal, Finite
from .fncore.ops import rearrange
from .fncore.points import Points
from .rispaces.norms import norm
from .vmeasure import IntervalSet, density_norm, variation

EXIT_OK, EXIT_USAGE, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2, 3
TABLE_X = np.concatenate([np.geomspace(1e-6, 0.1, 21), np.linspace(0.15, 1.0, 18)])


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    return f"{v:.12g}"


def _ext_row(label: str, v: ExtReal) -> dict:
    if isinstance(v, Finite):
        return {"quantity": label, "kind": "finite", "value": fmt(v.value),
                "err_bound": f"{v.err:.3g}", "approximate": str(v.approximate).lower()}
    if isinstance(v, Divergent):
        return {"quantity": label, "kind": "divergent", "value": "inf", "err_bound": "",
                "route": v.route}
    return {"quantity": label, "kind": "unknown", "value": "", "err_bound": "", "reason": v.reason}


def _exit_for(v: ExtReal) -> int:
    if isinstance(v, Finite):
        return EXIT_OK
    return EXIT_NO if isinstance(v, Divergent) else EXIT_UNKNOWN


def _verdict_exit(verdicts) -> int:
    if "fail" in verdicts:
        return EXIT_NO
    return EXIT_UNKNOWN if "unknown" in verdicts else EXIT_OK


# argument helpers --------------------------------------------------------------

def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"{args.command} needs --{name}")
    return v


def _function(args):
    return decode_function(parse_json(_need(args, "function"), "function"), "--function")


def _space(args):
    return decode_space(parse_json(_need(args, "space"), "space"), "--space")


def _phi(args):
    return decode_phi(parse_json(_need(args, "phi"), "phi"), "--phi")


# commands ------------------------------------------------------------------------

def _table_of(f) -> list[dict]:
    if is_divergent(f):
        return [{"x": fmt(x), "value": "inf"} for x in TABLE_X]
    vals = f.eval(Points.at(TABLE_X))
    return [{"x": fmt(x), "value": fmt(float(v))} for x, v in zip(TABLE_X, vals)]


def cmd_transform(args):
    f = _function(args)
    op = {"rearrange": rearrange, "cesaro": cesaro, "copson": copson}[args.command]
    g = op(f)
    status = EXIT_NO if is_divergent(g) else EXIT_OK
    payload = {"command": args.command, "result": encode_function(g), "table": _table_of(g)}
    return status, payload, payload["table"]


def cmd_norm(args):
    v = norm(_space(args), _function(args), args.tol)
    row = _ext_row("norm", v)
    return _exit_for(v), {"command": "norm", "result": row}, [row]


def cmd_variation(args):
    try:
        A = IntervalSet.parse(args.set) if args.set else IntervalSet(((0.0, 1.0),))
    except ValueError as exc:
        raise UsageError(f"--set: {exc}") from None
    v = variation(_space(args), A, args.tol)
    row = _ext_row("variation", v)
    return _exit_for(v), {"command": "variation", "set": list(map(list, A.intervals)), "result": row}, [row]


def cmd_density_norm(args):
    y = _need(args, "y")
    if not (0 < y <= 1):
        raise UsageError("--y must lie in (0, 1]")
    v = density_norm(_space(args), y, args.tol)
    row = _ext_row("density_norm", v)
    return _exit_for(v), {"command": "density-norm", "y": y, "result": row}, [row]


def _configured(args, sid):
    """The certificate run for ``sid``, honouring optional overrides."""
    if sid == "eigen" and args.alpha is not None:
        return lambda: cert.cert_eigen(args.alpha)
    if sid == "fubini_l1" and args.function is not None:
        f = _function(args)
        return lambda: cert.cert_fubini_l1(f)
    if sid in ("variation_identity", "not_ri", "marcinkiewicz_strict") and args.phi is not None:
        phi = _phi(args)
        fn = {"variation_identity": cert.cert_variation_identity, "not_ri": cert.cert_not_ri,
              "marcinkiewicz_strict": cert.cert_marcinkiewicz_strict}[sid]
        return lambda: fn(phi)
    if sid in ("al", "x_in_l1var") and args.space is not None:
        X = _space(args)
        fn = cert.cert_al if sid == "al" else cert.cert_x_in_l1var
        return lambda: fn(X)
    return cert.default_suite()[sid]


def cmd_check(args):
    suite = cert.default_suite()
    sid = args.statement.replace("-", "_")
    if sid != "all" and sid not in suite:
        raise UsageError(f"unknown statement id {args.statement!r}; available: "
                         + ", ".join(sorted(suite)) + ", all")
    ids = sorted(suite) if sid == "all" else [sid]
    runs = [_configured(args, i) for i in ids]
    with ThreadPoolExecutor(max_workers=min(4, len(runs))) as pool:
        certs = list(pool.map(lambda r: r(), runs))
    payload = {"command": "check", "certificates": [c.to_dict() for c in certs]}
    rows = [{"statement_id": c.statement_id, "verdict": c.verdict} for c in certs]
    return _verdict_exit([c.verdict for c in certs]), payload, rows


def cmd_report(args):
    from .acceptance import run_all
    results = run_all()
    rows = [{"criterion": r.number, "title": r.title, "verdict": "pass" if r.passed else "fail",
             "detail": r.detail} for r in results]
    payload = {"command": "report", "criteria": rows}
    if args.figures:
        from .figures import render_all
        payload["figures"] = render_all(args.figures)
    return (EXIT_OK if all(r.passed for r in results) else EXIT_NO), payload, rows


COMMANDS = {"rearrange": cmd_transform, "cesaro": cmd_transform, "copson": cmd_transform,
            "norm": cmd_norm, "variation": cmd_variation, "density-norm": cmd_density_norm,
            "check": cmd_check, "report": cmd_report}


def _tol(text: str) -> float:
    v = float(text)
    if not (0 < v <= 1e-2):
        raise argparse.ArgumentTypeError("tol must lie in (0, 1e-2]")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="space as JSON, e.g. '{\"kind\":\"lp\",\"p\":2}'")
    common.add_argument("--function", help="function as JSON, e.g. '{\"kind\":\"power\",\"a\":-0.5}'")
    common.add_argument("--phi", help="fundamental function as JSON, e.g. '{\"kind\":\"power\",\"a\":0.5}'")
    common.add_argument("--tol", type=_tol, default=1e-6)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--alpha", type=float)
    common.add_argument("--y", type=float)
    common.add_argument("--set", help="interval list 'a,b;c,d'")

    p = argparse.ArgumentParser(prog="cesaro-ri", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("rearrange", "cesaro", "copson", "norm", "variation", "density-norm"):
        sub.add_parser(name, parents=[common])
    chk = sub.add_parser("check", parents=[common], help="run a named certificate or all of them")
    chk.add_argument("statement", help="statement id or 'all'")
    rep = sub.add_parser("report", parents=[common], help="run the acceptance table")
    rep.add_argument("--figures", metavar="DIR", help="also render matplotlib figures into DIR")
    return p


def render(payload: dict, rows: list[dict], form: str) -> str:
    if form == "json":
        return json.dumps(payload, indent=2)
    buf = io.StringIO()
    keys = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        status, payload, rows = COMMANDS[args.command](args)
    except (UsageError, CodecError) as exc:
        print(f"cesaro-ri: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(payload, rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
