"""Command-line harness: ``quakelab <command> [options]``.

Exit codes: 0 on success, 1 on invalid input, 2 on numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .barycentric import DEFAULT_QUADRATURE, DEFAULT_TOL
from .earthquake import build_earthquake, eval_boundary, eval_interior, recover_measure, verify_left
from .errors import NumericalError, ValidationError
from .experiments import (
    BoxTestFunction,
    ExperimentReport,
    ProxyParams,
    Verdict,
    box_functional,
    constant_stack,
    decaying_stack,
    default_boxes,
    run_asymptotic_test,
    run_odelta_test,
    run_scaling_path,
)
from .hyperbolic import BoundaryPoint, HPoint
from .lamination import EMPTY, FiniteMeasuredLamination, read_lamination, sampled_norm, thurston_norm


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_point(tok: str):
    """``inf`` or a real number is a boundary point; ``x+yj`` is interior."""
    tok = tok.strip()
    if tok.lower() in ("inf", "infinity"):
        return BoundaryPoint.infinity()
    try:
        if "j" in tok:
            z = complex(tok)
            if z.imag <= 0:
                raise ValidationError(f"interior point {tok} must have positive imaginary part")
            return HPoint(z.real, z.imag)
        return BoundaryPoint.real(float(tok))
    except ValueError:
        raise ValidationError(f"cannot parse point {tok!r}") from None


def _load(path) -> FiniteMeasuredLamination:
    if path is None:
        return EMPTY
    try:
        return read_lamination(path)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(args) -> ExperimentReport:
    mu = _load(args.lamination)
    toks = list(args.points.split(",")) if args.points else []
    if args.points_file:
        toks += Path(args.points_file).read_text().split()
    E = build_earthquake(mu)
    rep = ExperimentReport("eval", {"lamination": args.lamination, "leaves": len(mu)},
                           ["input", "kind", "re", "im"])
    for tok in toks:
        p = parse_point(tok)
        if isinstance(p, BoundaryPoint):
            q = eval_boundary(E, p)
            rep.rows.append([tok.strip(), "boundary", q.value, 0.0])
        else:
            q = eval_interior(E, p)
            rep.rows.append([tok.strip(), "interior", q.x, q.y])
    return rep


def cmd_norm(args) -> ExperimentReport:
    mu = _load(args.lamination)
    rep = ExperimentReport("norm", {"lamination": args.lamination, "samples": args.samples, "seed": args.seed},
                           ["thurston_norm", "sampled_norm"])
    sampled = sampled_norm(mu, args.samples, args.seed) if args.samples else math.nan
    rep.rows.append([thurston_norm(mu), sampled])
    return rep


def cmd_recover(args) -> ExperimentReport:
    mu = _load(args.lamination)
    got = recover_measure(build_earthquake(mu))
    rep = ExperimentReport("recover", {"lamination": args.lamination, "tol": args.tol},
                           ["p", "q", "weight", "recovered", "error"])
    worst = 0.0 if len(got) == len(mu) else math.inf
    for g, w in mu.leaves:
        match = [v for h, v in got.leaves if h == g]
        r = match[0] if match else math.nan
        err = abs(r - w) if match else math.inf
        worst = max(worst, err)
        rep.rows.append([g.p.value, g.q.value, w, r, err])
    rep.verdicts.append(Verdict("round_trip", bool(worst < args.tol), args.tol, worst))
    return rep


def cmd_verify_left(args) -> ExperimentReport:
    mu = _load(args.lamination)
    res = verify_left(build_earthquake(mu, flips=tuple(args.flip)), seed=args.seed)
    rep = ExperimentReport("verify-left", {"lamination": args.lamination, "flip": args.flip, "seed": args.seed},
                           ["from", "to", "reason"])
    for v in res.violations:
        rep.rows.append([v["from"], v["to"], v["reason"]])
    rep.verdicts.append(Verdict("left", res.ok, 0.0, float(len(res.violations)),
                                f"pairs_checked={res.pairs_checked}"))
    return rep


def cmd_box_functional(args) -> ExperimentReport:
    mu1 = _load(args.lamination)
    mu2 = _load(args.against)
    boxes = default_boxes(args.boxes, args.seed)
    phi = BoxTestFunction(power=args.power)
    val = box_functional(mu1, mu2, phi, boxes)
    rep = ExperimentReport("box-functional",
                           {"lamination": args.lamination, "against": args.against, "boxes": args.boxes,
                            "power": args.power, "seed": args.seed},
                           ["sampled_S_phi"])
    rep.rows.append([val])
    return rep


def _proxy(args) -> ProxyParams:
    return ProxyParams(quadrature_n=args.quadrature, tol=args.tol)


def cmd_scaling_path(args) -> ExperimentReport:
    if args.lamination:
        mu = _load(args.lamination)
    else:
        mu = FiniteMeasuredLamination.from_pairs([(0.0, math.inf, args.weight)])
    t_list = None
    if args.steps is not None:
        from .experiments import scaling_times

        t_list = scaling_times(args.t0, args.steps)
    return run_scaling_path(mu, args.t0, t_list, _proxy(args), args.threshold)


def cmd_asymptotic_test(args) -> ExperimentReport:
    fams = [decaying_stack(args.c, args.r, args.leaves), constant_stack(args.c, args.leaves)]
    return run_asymptotic_test(fams, args.radii, _proxy(args), seed=args.seed)


def cmd_odelta_test(args) -> ExperimentReport:
    return run_odelta_test(args.alphas, args.n_list, args.c)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="solver / comparison tolerance")
    common.add_argument("--quadrature", type=int, default=DEFAULT_QUADRATURE, help="circle quadrature nodes")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    p = _Parser(prog="quakelab", description="Finite earthquakes and desk-scale experiments.",
                parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        s = sub.add_parser(name, help=help_, parents=[common])
        s.set_defaults(func=func)
        return s

    s = add("eval", cmd_eval, "images of boundary/interior points")
    s.add_argument("--lamination", help="lamination file (default: empty)")
    s.add_argument("--points", help="comma-separated points: reals, 'inf', or x+yj")
    s.add_argument("--points-file", help="whitespace-separated points")

    s = add("norm", cmd_norm, "Thurston norm")
    s.add_argument("lamination")
    s.add_argument("--samples", type=int, default=0, help="also report a sampled-arc estimate")

    s = add("recover", cmd_recover, "measure round trip")
    s.add_argument("lamination")

    s = add("verify-left", cmd_verify_left, "check the left-earthquake condition")
    s.add_argument("lamination")
    s.add_argument("--flip", type=int, action="append", default=[], help="reverse this leaf (testing)")

    s = add("box-functional", cmd_box_functional, "sampled box functional")
    s.add_argument("lamination")
    s.add_argument("--against", help="second lamination (default: empty)")
    s.add_argument("--boxes", type=int, default=200)
    s.add_argument("--power", type=float, default=1.0)

    s = add("scaling-path", cmd_scaling_path, "proxy distance along t -> (1-t) mu")
    s.add_argument("--lamination")
    s.add_argument("--weight", type=float, default=0.2, help="single-leaf weight when no file is given")
    s.add_argument("--t0", type=float, default=0.5)
    s.add_argument("--steps", type=_floats)
    s.add_argument("--threshold", type=float, default=1e-3)

    s = add("asymptotic-test", cmd_asymptotic_test, "geodesic stacks: end profile vs Beltrami")
    s.add_argument("--c", type=float, default=0.5)
    s.add_argument("--r", type=float, default=0.5)
    s.add_argument("--leaves", type=int, default=12)
    s.add_argument("--radii", type=_floats)

    s = add("odelta-test", cmd_odelta_test, "circle mass bound for cap families")
    s.add_argument("--alphas", type=_floats, default=[0.5, 1.0, 1.5])
    s.add_argument("--n-list", type=_ints, default=[8, 16, 32, 64])
    s.add_argument("--c", type=float, default=1.0)
    return p


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.func(args)
    except ValidationError as exc:
        code, exc_ = 1, exc
    except NumericalError as exc:
        code, exc_ = 2, exc
    else:
        _emit(rep.render(args.format), args.out)
        return 0
    print(f"quakelab {args.command}: {exc_}", file=sys.stderr)
    err = ExperimentReport(args.command, {"argv": list(sys.argv[1:] if argv is None else argv)},
                           ["error", "message"], [[type(exc_).__name__, str(exc_)]])
    if args.out:
        _emit(err.render(args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
