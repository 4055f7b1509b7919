"""Command-line front end.

Every command prints one report (JSON by default) and exits 0. Failures
print a JSON error object to stderr: exit 2 for unparseable input, 3 for a
violated precondition, 4 when a numerical search gives up. ``verify-paper``
exits 1 when a re-derived artifact does not match.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from qjoin.bordering import BorderingSpec, algorithm1, border_once, join_q_lower_bound
from qjoin.bounds import q_bound_report
from qjoin.errors import NonConvergence, NowhereZeroFailure
from qjoin.graphs import join, parse_graph, respects_pattern
from qjoin.io import format_matrix, load_matrix, save_matrix
from qjoin.joins import assemble_join, design_join_spectrum
from qjoin.realizers import IepOptions, iep_solve
from qjoin.reproduce import CHECKS
from qjoin.rng import make_rng, random_orthogonal
from qjoin.spectral import DEFAULT_CLUSTER_TOL, c_of, parse_spectrum, spectrum_of
from qjoin.symbolic import enumerate_bordering_spectra

TOL_ENV = "QJOIN_CLUSTER_TOL"

EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERICAL = 1, 2, 3, 4


@dataclass
class RunReport:
    command: list
    seed: int
    outputs: dict = field(default_factory=dict)
    verification: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "outputs": self.outputs,
            "verification": self.verification,
            "wall_time_s": self.wall_time_s,
        }


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_CLUSTER_TOL
    tol = float(raw)
    if not tol > 0:
        raise ValueError(f"{TOL_ENV} must be positive")
    return tol


# -- argument types -----------------------------------------------------------


def _arg(fn, what):
    def convert(text):
        try:
            return fn(text)
        except (ValueError, OSError) as exc:
            raise argparse.ArgumentTypeError(f"bad {what} {text!r}: {exc}") from exc

    convert.__name__ = what
    return convert


def _int_list(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


int_list = _arg(_int_list, "integer list")
float_list = _arg(_float_list, "number list")
spectrum_arg = _arg(parse_spectrum, "spectrum")
graph_arg = _arg(parse_graph, "graph")
matrix_arg = _arg(load_matrix, "matrix file")


# -- commands -------------------------------------------------------------------


def _spectrum_dict(s):
    return {"values": list(s.values), "multiplicities": list(s.multiplicities), "text": str(s)}


def _write_matrix(args, A, report):
    if args.out:
        save_matrix(args.out, A)
        report.outputs["matrix_file"] = args.out
    else:
        report.outputs["matrix"] = format_matrix(A).split("\n")[1:-1]


def cmd_cmt(args, report):
    value, witness = c_of(args.m, args.t)
    report.outputs.update({"m": list(args.m), "t": args.t, "value": value, "witness": list(witness.p)})


def cmd_border(args, report):
    spec = BorderingSpec(args.remove, args.add)
    step = border_once(args.matrix, spec, args.seed, args.tol)
    s = spectrum_of(step.result, args.tol)
    before = spectrum_of(args.matrix, args.tol)
    expected = before.shifted(step.removed, spec.add, args.tol)
    report.outputs.update(
        {
            "alpha": step.alpha,
            "b": step.b.tolist(),
            "U0": step.U0.tolist(),
            "spectrum_before": _spectrum_dict(before),
            "spectrum_after": _spectrum_dict(s),
        }
    )
    report.verification["shift_rule"] = {"ok": s.isclose(expected, 10 * args.tol), "cluster_tol": args.tol}
    _write_matrix(args, step.result, report)


def _start_matrix(args):
    if args.matrix is not None:
        return args.matrix
    lam = args.spectrum.eigenvalues()
    Q = random_orthogonal(len(lam), make_rng(args.seed, 0xA1))
    return Q @ np.diag(lam) @ Q.T


def cmd_algorithm1(args, report):
    A = _start_matrix(args)
    start = spectrum_of(A, args.tol)
    steps = algorithm1(A, args.t, seed=args.seed, cluster_tol=args.tol)
    chain = []
    for step in steps:
        s = spectrum_of(step.result, args.tol)
        chain.append(
            {
                "remove": list(step.spec.remove),
                "add": list(step.spec.add),
                "alpha": step.alpha,
                "b": step.b.tolist(),
                "spectrum": _spectrum_dict(s),
                "c_value": c_of(s.multiplicities, args.t)[0] if s.q >= 2 else 0,
            }
        )
    report.outputs.update({"start": _spectrum_dict(start), "t": args.t, "steps": chain})
    final = steps[-1].result if steps else A
    report.verification["final_q"] = {"q": spectrum_of(final, args.tol).q, "at_most_t": spectrum_of(final, args.tol).q <= args.t, "cluster_tol": args.tol}
    _write_matrix(args, final, report)


def cmd_enumerate(args, report):
    r = args.r if args.r is not None else c_of(args.spectrum.multiplicities, args.t)[0]
    fams = enumerate_bordering_spectra(args.spectrum, args.t, r)
    report.outputs.update({"spectrum": str(args.spectrum), "t": args.t, "r": r, "families": [str(f) for f in fams]})


def cmd_realize(args, report):
    A = iep_solve(args.graph, args.spectrum, IepOptions(seed=args.seed))
    s = spectrum_of(A, args.tol)
    resid = float(np.max(np.abs(np.linalg.eigvalsh(A) - args.spectrum.eigenvalues())))
    report.outputs["spectrum"] = _spectrum_dict(s)
    report.verification["spectral_residual"] = {"value": resid, "tolerance": IepOptions().residual_tol}
    report.verification["pattern"] = {"ok": respects_pattern(A, args.graph), "zero_tol": 1e-10}
    _write_matrix(args, A, report)


def cmd_join(args, report):
    G, H = args.g, args.h
    if G.n > H.n:
        G, H = H, G
    design = design_join_spectrum(G.n, H.n, args.k, args.seed)
    res = assemble_join(design, G, H, IepOptions(seed=args.seed))
    s = spectrum_of(res.matrix, args.tol)
    report.outputs.update(
        {"design": design.to_dict(), "attempts": res.attempts, "spectrum": _spectrum_dict(s), "q": s.q}
    )
    report.verification["pattern"] = {"ok": respects_pattern(res.matrix, join(G, H)), "zero_tol": 1e-10}
    report.verification["min_cross_entry"] = {"value": res.min_cross_entry, "threshold": 1e-7}
    report.verification["trace"] = {
        "error": abs(float(np.trace(res.matrix)) - design.expected_trace()),
        "tolerance": 1e-8,
    }
    report.verification["formula"] = {
        "ceil_bound": math.ceil((G.n + H.n) / (G.n + 1)),
        "q_matches": s.q == args.k + 1,
    }
    _write_matrix(args, res.matrix, report)


def cmd_bounds(args, report):
    b = q_bound_report(args.graph)
    report.outputs["bound"] = b.to_dict()
    if args.mult_list is not None:
        report.outputs["list_lower_bound"] = join_q_lower_bound(args.mult_list, args.g_size)


def cmd_verify_paper(args, report):
    result = CHECKS[args.example_id]()
    report.outputs["example"] = args.example_id
    report.verification = result


COMMANDS = {
    "cmt": cmd_cmt,
    "border": cmd_border,
    "algorithm1": cmd_algorithm1,
    "enumerate": cmd_enumerate,
    "realize": cmd_realize,
    "join": cmd_join,
    "bounds": cmd_bounds,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qjoin", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help=f"cluster tolerance (default ${TOL_ENV} or 1e-8)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cmt", help="gap optimum C(m, t) with its witness")
    c.add_argument("--m", type=int_list, required=True)
    c.add_argument("--t", type=int, required=True)

    c = sub.add_parser("border", help="one bordering step")
    c.add_argument("--matrix", type=matrix_arg, required=True)
    c.add_argument("--remove", type=float_list, required=True)
    c.add_argument("--add", type=float_list, required=True)
    c.add_argument("--out")

    c = sub.add_parser("algorithm1", help="border until at most t distinct eigenvalues")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", type=matrix_arg)
    src.add_argument("--spectrum", type=spectrum_arg)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--out")

    c = sub.add_parser("enumerate", help="all terminal spectra of C-decreasing bordering chains")
    c.add_argument("--spectrum", type=spectrum_arg, required=True)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--r", type=int)

    c = sub.add_parser("realize", help="matrix with given graph and spectrum")
    c.add_argument("--graph", type=graph_arg, required=True)
    c.add_argument("--spectrum", type=spectrum_arg, required=True)
    c.add_argument("--out")

    c = sub.add_parser("join", help="matrix on G v H with k+1 distinct eigenvalues")
    c.add_argument("--g", type=graph_arg, required=True)
    c.add_argument("--h", type=graph_arg, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--out")

    c = sub.add_parser("bounds", help="known bounds on q of a graph")
    c.add_argument("--graph", type=graph_arg, required=True)
    c.add_argument("--mult-list", type=int_list)
    c.add_argument("--g-size", type=int, default=1, help="rows added when using --mult-list")

    c = sub.add_parser("verify-paper", help="re-derive a reference artifact")
    c.add_argument("example_id", choices=sorted(CHECKS))
    return p


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        return "\n".join(
            f"{pad}{k}:" + ("\n" + _text(v, indent + 1) if isinstance(v, (dict, list)) and v else f" {v}")
            for k, v in obj.items()
        )
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {x}" if not isinstance(x, (dict, list)) else _text(x, indent + 1) for x in obj)
    return f"{pad}{obj}"


def _fail(code, exc, fmt):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("best_residual", "best_margin", "best_min_abs", "attempts"):
        if hasattr(exc, attr):
            err[attr] = getattr(exc, attr)
    print(json.dumps(err, sort_keys=True) if fmt == "json" else _text(err), file=sys.stderr)
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.tol = args.tol if args.tol is not None else default_tolerance()
    except ValueError as exc:
        return _fail(EXIT_PARSE, exc, args.format)
    report = RunReport(command=argv, seed=args.seed)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, report)
    except (NonConvergence, NowhereZeroFailure) as exc:
        return _fail(EXIT_NUMERICAL, exc, args.format)
    except ValueError as exc:
        return _fail(EXIT_PRECONDITION, exc, args.format)
    except OSError as exc:
        return _fail(EXIT_PARSE, exc, args.format)
    report.wall_time_s = time.perf_counter() - start
    out = report.to_dict()
    print(json.dumps(out, sort_keys=True) if args.format == "json" else _text(out))
    if args.command == "verify-paper" and not report.verification.get("passed", False):
        return EXIT_VERIFY
    return 0
