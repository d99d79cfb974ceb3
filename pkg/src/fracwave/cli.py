"""``fracwave`` command line: derive, solve, verify, eval, figure-data.

Exit codes: 0 success, 1 verification failure, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from .engine import EQUATIONS, candidate_sets, coefficient_system, find_set, reduced_ode
from .errors import FracWaveError, PoleOfInverse, SingularPoint
from .families import ClosedFormSolution, PhiCase, PhiKind, assemble_solution
from .verifier import (
    DEFAULT_FD_STEP,
    DEFAULT_MASK_MARGIN,
    DEFAULT_TOLERANCE,
    GridSpec,
    ode_residual_symbolic,
    pde_residual_numeric,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

GRID_DEFAULTS = {"x0": -3.0, "x1": 3.0, "nx": 121, "t0": 0.1, "t1": 2.0, "nt": 39}
VERIFY_POINTS = 20


@dataclass(frozen=True)
class FigurePreset:
    id: str
    equation: str
    set_label: str
    case: PhiKind
    params: dict
    alpha: float = 0.5
    C: float = 1.0
    D: float = 1.0


FIGURE_PRESETS = {
    p.id: p
    for p in (
        FigurePreset("1a", "boussinesq", "Set2", PhiKind.TRIG, {"lambda": 1, "mu": 1}),
        FigurePreset("1b", "boussinesq", "Set2", PhiKind.HYPERBOLIC, {"lambda": 0.5, "mu": -0.3}),
        FigurePreset("1c", "boussinesq", "Set2", PhiKind.RATIONAL, {"lambda": 1, "mu": 0}),
        FigurePreset("2a", "coupled", "Set3", PhiKind.TRIG, {"lambda": 1, "mu": 1, "beta": 1, "gamma": -1}),
        FigurePreset("2b", "coupled", "Set3", PhiKind.HYPERBOLIC, {"lambda": 0.5, "mu": -0.3, "beta": 1, "gamma": 1}),
        FigurePreset("2c", "coupled", "Set3", PhiKind.RATIONAL, {"lambda": 1, "mu": 0, "beta": 1, "gamma": -1}),
    )
}


class UsageError(Exception):
    pass


# -- formatting ----------------------------------------------------------


def format_number(value: float) -> str:
    """17 significant digits, ``nan`` for masked points, no negative zero."""
    if value is None or math.isnan(value):
        return "nan"
    if value == 0:
        return "0"
    return format(value, ".17g")


def render_solve(cands, as_json: bool) -> str:
    if as_json:
        return json.dumps([c.to_dict() for c in cands], indent=2)
    lines = []
    for c in cands:
        d = c.to_dict()
        vals = ", ".join(f"{k} = {v}" for k, v in d["values"].items())
        speed = "kappa free" if c.kappa_free else f"kappa^2 = {d['kappa_squared']}"
        lines.append(f"{c.label}: {speed}; {vals}")
    return "\n".join(lines)


# -- field sampling ------------------------------------------------------


def sample_field(sol: ClosedFormSolution, grid: GridSpec, mask_margin: float = DEFAULT_MASK_MARGIN):
    """Rows ``(x, t, u[, v])`` with ``nan`` inside singularity masks."""
    xs, ts = grid.xs(), grid.ts()
    corners = [sol.epsilon(float(x), float(t)) for x in (xs[0], xs[-1]) for t in (ts[0], ts[-1])]
    poles = sol.singularities((min(corners) - mask_margin, max(corners) + mask_margin))
    u = sol.compiled()
    c = sol.coupling_factor() if sol.coupled else None
    rows = []
    for t in ts:
        t = float(t)
        for x in xs:
            x = float(x)
            if poles.points and poles.near(sol.epsilon(x, t), mask_margin):
                val = math.nan
            else:
                try:
                    val = u(x, t)
                except (SingularPoint, PoleOfInverse):
                    val = math.nan
            rows.append((x, t, val) if c is None else (x, t, val, c * val))
    return rows


def write_csv(rows, coupled: bool, stream: TextIO) -> None:
    stream.write("x,t,u,v\n" if coupled else "x,t,u\n")
    for row in rows:
        stream.write(",".join(format_number(v) for v in row) + "\n")


# -- argument handling ---------------------------------------------------


def _params(args) -> dict:
    if args.lam is None or args.mu is None:
        raise UsageError("--lambda and --mu are required")
    params = {"lambda": args.lam, "mu": args.mu, "beta": args.beta, "gamma": args.gamma}
    if args.kappa is not None:
        params["kappa"] = args.kappa
    return params


def _solution(args, equation, set_label, case_kind, params, alpha, C=1.0, D=1.0) -> ClosedFormSolution:
    cand = find_set(equation, set_label)
    C = C if args.C is None else args.C
    D = D if args.D is None else args.D
    case = PhiCase(PhiKind.parse(case_kind) if isinstance(case_kind, str) else case_kind, C, D)
    return assemble_solution(cand, case, params, 1 if args.k_sign == "+" else -1, alpha)


def _grid(args, default_points=None) -> GridSpec:
    vals = {k: getattr(args, k) for k in GRID_DEFAULTS}
    for k, v in GRID_DEFAULTS.items():
        if vals[k] is None:
            vals[k] = default_points if (default_points and k in ("nx", "nt")) else v
    return GridSpec(**vals)


def _emit(text: str, out: str | None, stdout: TextIO) -> None:
    if out is None:
        stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _write_rows(rows, coupled, out, stdout) -> None:
    buf = io.StringIO()
    write_csv(rows, coupled, buf)
    _emit(buf.getvalue(), out, stdout)


# -- commands ------------------------------------------------------------


def cmd_derive(args, stdout) -> int:
    system = coefficient_system(args.equation)
    text = system.to_json() if args.json else system.to_text()
    _emit(text + "\n", args.out, stdout)
    return EXIT_OK


def cmd_solve(args, stdout) -> int:
    cands = candidate_sets(args.equation, include_degenerate=args.include_degenerate)
    _emit(render_solve(cands, args.json) + "\n", args.out, stdout)
    return EXIT_OK


def cmd_verify(args, stdout) -> int:
    if args.set is None or args.case is None:
        raise UsageError("verify needs --set and --case")
    alpha = 0.5 if args.alpha is None else args.alpha
    sol = _solution(args, args.equation, args.set, args.case, _params(args), alpha)
    residuals = ode_residual_symbolic(sol.candidate, reduced_ode(args.equation))
    nonzero = {str(n): r.to_text() for n, r in residuals.items() if not r.is_zero()}
    numeric = pde_residual_numeric(sol, _grid(args, VERIFY_POINTS), args.fd_step, args.mask_margin)
    ok_sym, ok_num = not nonzero, numeric.passed(args.tol)
    report = {
        "equation": args.equation,
        "set": sol.candidate.label,
        "case": sol.case.kind.value,
        "alpha": alpha,
        "kappa_squared": str(sol.kappa_squared),
        "symbolic": {"passed": ok_sym, "residuals": nonzero},
        "numeric": dict(numeric.to_dict(), passed=ok_num, tolerance=args.tol),
        "passed": ok_sym and ok_num,
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out, stdout)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_eval(args, stdout) -> int:
    if args.set is None or args.case is None:
        raise UsageError("eval needs --set and --case")
    alpha = 0.5 if args.alpha is None else args.alpha
    sol = _solution(args, args.equation, args.set, args.case, _params(args), alpha)
    rows = sample_field(sol, _grid(args), args.mask_margin)
    _write_rows(rows, sol.coupled, args.out, stdout)
    return EXIT_OK


def cmd_figure_data(args, stdout) -> int:
    preset = FIGURE_PRESETS[args.preset]
    params = dict(preset.params)
    for key, attr in (("lambda", "lam"), ("mu", "mu"), ("beta", "beta"), ("gamma", "gamma")):
        if getattr(args, attr) is not None:
            params[key] = getattr(args, attr)
    alpha = preset.alpha if args.alpha is None else args.alpha
    sol = _solution(args, preset.equation, preset.set_label, preset.case, params, alpha, preset.C, preset.D)
    rows = sample_field(sol, _grid(args), args.mask_margin)
    _write_rows(rows, sol.coupled, args.out, stdout)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def _add_solution_flags(p, presets=False):
    p.add_argument("--set", dest="set", default=None, help="Set1..Set6 (or ExtraN/DegenerateN)")
    p.add_argument("--case", choices=[k.value for k in PhiKind], default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--beta", type=float, default=None if presets else 1.0)
    p.add_argument("--gamma", type=float, default=None if presets else 1.0)
    p.add_argument("--kappa", type=float, default=None, help="wave speed, only for sets that leave it free")
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--k-sign", dest="k_sign", choices=["+", "-"], default="+")
    p.add_argument("--mask-margin", dest="mask_margin", type=float, default=DEFAULT_MASK_MARGIN)
    for name in ("x0", "x1", "t0", "t1"):
        p.add_argument(f"--{name}", type=float, default=None)
    for name in ("nx", "nt"):
        p.add_argument(f"--{name}", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, equation=True):
        if equation:
            p.add_argument("--equation", choices=EQUATIONS, required=True)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("derive", help="print the coefficient system")
    common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("solve", help="print the solution sets")
    common(p)
    p.add_argument("--include-degenerate", dest="include_degenerate", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a set symbolically and on a grid")
    common(p)
    _add_solution_flags(p)
    p.add_argument("--fd-step", dest="fd_step", type=float, default=DEFAULT_FD_STEP)
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="sample u (and v) on a grid as CSV")
    common(p)
    _add_solution_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("figure-data", help="CSV for a figure preset")
    p.add_argument("preset", choices=sorted(FIGURE_PRESETS))
    common(p, equation=False)
    _add_solution_flags(p, presets=True)
    p.set_defaults(func=cmd_figure_data)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, stdout)
    except (UsageError, FracWaveError, ValueError) as exc:
        stderr.write(f"fracwave: error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
