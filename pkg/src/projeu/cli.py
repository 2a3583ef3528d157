"""Command-line interface.

Exit codes: 0 success, 1 parse or schema error, 2 invariant violation,
3 equilibrium search did not converge.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from projeu import documents
from projeu.equilibrium import (
    DEFAULT_DAMPING,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    solve,
    solve_with_restarts,
)
from projeu.exceptions import ConvergenceError, InvariantError, SchemaError
from projeu.lottery import Lottery
from projeu.subjective import Act, Belief, act_utility, ellsberg_scenario
from projeu.triangle import raster_to_csv, triangle_raster
from projeu.utility import allais_scenario, classify, utility

EXIT_OK, EXIT_SCHEMA, EXIT_INVARIANT, EXIT_NONCONVERGED = 0, 1, 2, 3


def fmt(v: float) -> str:
    """12 significant digits; negative zero prints as ``0``."""
    return f"{float(v) + 0.0:.12g}"


def fmt_vec(v) -> str:
    return "[" + ", ".join(fmt(x) for x in v) + "]"


def relation(a: float, b: float, tol: float = 1e-12) -> str:
    if a > b + tol:
        return "≻"
    if a < b - tol:
        return "≺"
    return "~"


class _Parser(argparse.ArgumentParser):
    # Usage errors share the exit code of malformed input.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def cmd_eval(args, out):
    u = documents.load(args.matrix, "payoff_matrix")
    target = documents.load(args.target)
    if isinstance(target, Lottery):
        value = utility(u, target)
    elif isinstance(target, Act):
        belief = (
            documents.load(args.belief, "belief")
            if args.belief
            else Belief.uniform(len(target))
        )
        value = act_utility(belief, u, target)
    else:
        raise SchemaError("target must be a lottery or act document", "$.kind")
    print(fmt(value), file=out)


def cmd_decompose(args, out):
    u = documents.load(args.matrix, "payoff_matrix")
    sd = u.spectrum
    err = float(np.max(np.abs(sd.reconstruct() - u.u)))
    print(f"eigenvalues: {fmt_vec(sd.eigenvalues)}", file=out)
    print("eigenvectors:", file=out)
    for lam, row in zip(sd.eigenvalues, sd.eigenvectors):
        print(f"  {fmt(lam)}: {fmt_vec(row)}", file=out)
    print(f"attitude: {classify(u, args.tol)}", file=out)
    status = "PASS" if err <= 1e-9 else "FAIL"
    print(f"reconstruction: {status} (max error {err:.3g})", file=out)


def cmd_allais(args, out):
    u, lots = allais_scenario()
    vals = {k: utility(u, x) for k, x in lots.items()}
    for k in "abcd":
        print(f"u({k}) = {fmt(vals[k])}", file=out)
    print(
        f"A {relation(vals['a'], vals['b'])} B, D {relation(vals['d'], vals['c'])} C",
        file=out,
    )


def cmd_ellsberg(args, out):
    sc = ellsberg_scenario(args.alpha)
    lot = {k: utility(sc.payoff, x) for k, x in sc.lotteries.items()}
    act = {k: act_utility(sc.belief, sc.payoff, f) for k, f in sc.acts.items()}
    print(f"alpha = {fmt(args.alpha)}", file=out)
    for name, key in (("w", "w"), ("l", "l"), ("r", "r"), ("r̄", "r_bar")):
        print(f"u({name}) = {fmt(lot[key])}", file=out)
    print(f"u(G) = {fmt(act['G'])}", file=out)
    print(f"u(Ḡ) = {fmt(act['G_bar'])}", file=out)
    print(
        f"R {relation(act['R'], act['G'])} G, R̄ {relation(act['R_bar'], act['G_bar'])} Ḡ",
        file=out,
    )


def cmd_triangle(args, out):
    u = documents.load(args.matrix, "payoff_matrix")
    text = raster_to_csv(triangle_raster(u, args.resolution))
    if args.output in (None, "-"):
        out.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _print_profile(profile, out):
    for i, x in enumerate(profile):
        print(
            f"player {i}: amplitudes {fmt_vec(x.amplitudes)} probabilities {fmt_vec(x.probabilities)}",
            file=out,
        )


def cmd_solve(args, out):
    g = documents.load(args.game, "game")
    opts = dict(tol=args.tol, max_iter=args.max_iter, damping=args.damping)
    try:
        res = solve_with_restarts(g, **opts) if args.restarts else solve(g, **opts)
    except ConvergenceError as exc:
        print("converged: no", file=out)
        print(f"residual: {fmt(exc.residual)}", file=out)
        _print_profile(exc.state, out)
        raise
    print("converged: yes", file=out)
    print(f"iterations: {res.iterations}", file=out)
    print(f"residual: {fmt(res.residual)}", file=out)
    _print_profile(res.profile, out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="projeu", description="Projective expected utility toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="utility of a lottery or act")
    p.add_argument("matrix", help="payoff_matrix document")
    p.add_argument("target", help="lottery or act document")
    p.add_argument("--belief", help="belief document (acts only; default uniform)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("decompose", help="spectral decomposition and risk attitude")
    p.add_argument("matrix")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("allais", help="Allais lotteries under the built-in payoff matrix")
    p.set_defaults(func=cmd_allais)

    p = sub.add_parser("ellsberg", help="two-urn Ellsberg acts for a given alpha")
    p.add_argument("--alpha", type=float, default=0.5)
    p.set_defaults(func=cmd_ellsberg)

    p = sub.add_parser("triangle", help="CSV utility raster over the probability triangle")
    p.add_argument("matrix")
    p.add_argument("--resolution", type=int, default=20)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_triangle)

    p = sub.add_parser("solve", help="equilibrium of a finite game")
    p.add_argument("game")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--damping", type=float, default=DEFAULT_DAMPING)
    p.add_argument("--restarts", action="store_true", help="retry from a 3-level grid of starts")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
