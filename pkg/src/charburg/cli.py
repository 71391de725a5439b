"""Command-line interface: ``charburg {sample,verify,figure,converge}``.

Exit codes: 0 success, 1 verification failure, 2 mathematical-domain error,
64 usage error.
"""
from __future__ import annotations

import argparse
import math
import shlex
import sys
from dataclasses import dataclass, fields
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .characteristic_solver import CharacteristicSolution, RootConfig
from .errors import CharburgError
from .fv_assessment import FvConfig, convergence_study
from .initial_conditions import InitialCondition
from .source_terms import SourceFamily
from . import verification

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 64

SOURCES = ("zero", "linear", "quadratic", "exponential")
ICS = ("affine", "piecewise-paper", "sine", "smoothstep")

PRESETS = {
    "fig1": dict(source="linear", beta=-2.0, ic="piecewise-paper", t=0.2),
    "fig2": dict(source="quadratic", beta=-2.0, ic="sine", amp=1.0, freq=2 * math.pi, t=0.15),
    "fig3": dict(source="exponential", beta=-1.0, ic="smoothstep", eps=1e-4, levels=(2.0, 1.0),
                 center=0.3, t=0.26),
    # smooth pre-shock problem used for convergence studies
    "quadratic": dict(source="quadratic", beta=-2.0, ic="sine", amp=1.0, freq=2 * math.pi, t=0.1),
}


@dataclass(frozen=True)
class RunSpec:
    command: str
    source: str = "zero"
    beta: float = -2.0
    ic: str = "sine"
    a: float = 1.0
    b: float = 0.0
    amp: float = 1.0
    freq: float = 2 * math.pi
    eps: float = 1e-4
    levels: Tuple[float, float] = (2.0, 1.0)
    center: float = 0.3
    domain: Tuple[float, float] = (0.0, 1.0)
    xmin: float = 0.0
    xmax: float = 1.0
    nx: int = 401
    t: float = 0.0
    tol: float = 1e-12
    max_iter: int = 200
    cells: int = 64
    nlevels: int = 4
    cfl: float = 0.9
    splitting: str = "godunov"
    source_update: str = "exact"
    figure: Optional[int] = None
    out: Optional[str] = None
    gnuplot: Optional[str] = None

    def family(self) -> SourceFamily:
        return {
            "zero": SourceFamily.zero,
            "linear": lambda: SourceFamily.linear(self.beta),
            "quadratic": lambda: SourceFamily.quadratic(self.beta),
            "exponential": lambda: SourceFamily.exponential(self.beta),
        }[self.source]()

    def initial_condition(self) -> InitialCondition:
        if self.ic == "affine":
            return InitialCondition.affine(self.a, self.b, self.domain)
        if self.ic == "piecewise-paper":
            return InitialCondition.piecewise_linear(InitialCondition.plateau_piecewise().breakpoints, self.domain)
        if self.ic == "sine":
            return InitialCondition.sine(self.amp, self.freq, self.domain)
        return InitialCondition.smoothed_step(self.levels[0], self.levels[1], self.center, self.eps, self.domain)

    def root_config(self) -> RootConfig:
        return RootConfig(abs_tol=self.tol, residual_tol=self.tol, max_iter=self.max_iter)

    def grid(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    def to_argv(self) -> List[str]:
        """Fully resolved argument list; parsing it reproduces this spec."""
        argv = [self.command]
        if self.command == "figure":
            argv.append(str(self.figure))
        for f in fields(self):
            if f.name in ("command", "figure"):
                continue
            v = getattr(self, f.name)
            if v is None:
                continue
            flag = "--" + f.name.replace("_", "-")
            if isinstance(v, tuple):
                v = ",".join(repr(float(c)) for c in v)
            elif isinstance(v, float):
                v = repr(v)
            # "--flag=value" keeps negative pairs such as "-1,2" from parsing as options
            argv.append(f"{flag}={v}")
        return argv


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> Tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("problem")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named configuration to start from")
    g.add_argument("--source", choices=SOURCES)
    g.add_argument("--beta", type=float)
    g.add_argument("--ic", choices=ICS)
    g.add_argument("--a", type=float, help="affine slope")
    g.add_argument("--b", type=float, help="affine intercept")
    g.add_argument("--amp", type=float, help="sine amplitude")
    g.add_argument("--freq", type=float, help="sine angular frequency")
    g.add_argument("--eps", type=float, help="smoothed-step epsilon")
    g.add_argument("--levels", type=_pair, help="smoothed-step levels LOWER,UPPER")
    g.add_argument("--center", type=float, help="smoothed-step centre")
    g.add_argument("--domain", type=_pair, help="initial-condition interval LO,HI")
    g = common.add_argument_group("grid and solver")
    g.add_argument("--xmin", type=float)
    g.add_argument("--xmax", type=float)
    g.add_argument("--nx", type=int)
    g.add_argument("--t", type=float)
    g.add_argument("--tol", type=float)
    g.add_argument("--max-iter", type=int)
    g = common.add_argument_group("finite volume")
    g.add_argument("--cells", type=int)
    g.add_argument("--nlevels", type=int)
    g.add_argument("--cfl", type=float)
    g.add_argument("--splitting", choices=("godunov", "strang"))
    g.add_argument("--source-update", choices=("exact", "rk4"))
    g = common.add_argument_group("output")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--gnuplot", help="also write a gnuplot script plotting the CSV")
    g.add_argument("--print-spec", action="store_true", help="print the resolved arguments and exit")

    parser = _Parser(prog="charburg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sample", parents=[common], help="exact solution on a grid as CSV")
    sub.add_parser("verify", parents=[common], help="run the invariant checks")
    fig = sub.add_parser("figure", parents=[common], help="data for the reference figures as CSV")
    fig.add_argument("figure", type=int, choices=(1, 2, 3))
    sub.add_parser("converge", parents=[common], help="finite-volume convergence table as CSV")
    return parser


def resolve(ns: argparse.Namespace) -> RunSpec:
    values = {}
    if ns.command == "figure":
        values.update(PRESETS[f"fig{ns.figure}"], nx=400, figure=ns.figure)
    elif ns.command == "converge":
        values["t"] = 0.1
    if ns.preset:
        values.update(PRESETS[ns.preset])
    for f in fields(RunSpec):
        v = getattr(ns, f.name, None)
        if v is not None and f.name != "command":
            values[f.name] = v
    spec = RunSpec(command=ns.command, **values)
    if spec.nx < 2:
        raise UsageError("--nx must be at least 2")
    if not spec.xmin < spec.xmax:
        raise UsageError("--xmin must be below --xmax")
    if not spec.t >= 0:
        raise UsageError("--t must be non-negative")
    if spec.command == "converge" and spec.nlevels < 3:
        raise UsageError("--nlevels must be at least 3")
    if spec.command == "converge" and spec.cells < 8:
        raise UsageError("--cells must be at least 8")
    if spec.gnuplot and not spec.out:
        raise UsageError("--gnuplot needs --out so the script can reference the CSV")
    return spec


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def sample_csv(spec: RunSpec, with_h0: bool = False) -> str:
    sol = CharacteristicSolution(spec.family(), spec.initial_condition(), spec.root_config())
    xs = spec.grid()
    q, y, r = sol.solve_arrays(xs, spec.t)
    head = "x,t,q,y,residual" + (",h0" if with_h0 else "")
    lines = [head]
    h0 = sol.ic.evaluate(xs) if with_h0 else None
    tt = _fmt(spec.t)
    for i, x in enumerate(xs):
        row = [_fmt(x), tt, _fmt(q[i]), _fmt(y[i]), _fmt(r[i])]
        if with_h0:
            row.append(_fmt(h0[i]))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def gnuplot_script(spec: RunSpec, with_h0: bool) -> str:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 'x'",
        "set ylabel 'q'",
        f"set title 't = {spec.t:g}'",
    ]
    plot = f"plot '{spec.out}' using 1:3 with lines lw 2 title 'q(x,t)'"
    if with_h0:
        plot += ", '' using 1:6 with lines dt 2 title 'h0(x)'"
    lines.append(plot)
    return "\n".join(lines) + "\n"


def converge_csv(spec: RunSpec) -> str:
    cfg = FvConfig(cells=spec.cells, t_end=spec.t, cfl=spec.cfl, splitting=spec.splitting,
                   source_update=spec.source_update)
    report = convergence_study(cfg, spec.family(), spec.initial_condition(), spec.nlevels, spec.root_config())
    return report.to_csv()


def run_verify(spec: RunSpec, explicit: bool, out) -> int:
    if explicit:
        problem = verification.Problem("selected", spec.family(), spec.initial_condition(), spec.t)
        checks = verification.problem_suite(problem, spec.root_config(), spec.grid())
    else:
        checks = verification.default_suite(spec.root_config())
    failed = 0
    for c in checks:
        out.write(c.line() + "\n")
        failed += not c.passed
    out.write(f"{'all checks passed' if not failed else f'{failed} check(s) failed'}\n")
    return EXIT_OK if not failed else EXIT_VERIFY


_PROBLEM_FLAGS = ("preset", "source", "beta", "ic", "a", "b", "amp", "freq", "eps", "levels", "center",
                  "domain", "xmin", "xmax", "nx", "t")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        spec = resolve(ns)
    except (UsageError, ValueError) as err:
        print(f"charburg: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    if ns.print_spec:
        print(shlex.join(spec.to_argv()))
        return EXIT_OK

    out = open(spec.out, "w", newline="\n") if spec.out else sys.stdout
    try:
        if spec.command == "verify":
            explicit = any(getattr(ns, k, None) is not None for k in _PROBLEM_FLAGS)
            return run_verify(spec, explicit, out)
        if spec.command == "converge":
            out.write(converge_csv(spec))
        else:
            with_h0 = spec.command == "figure"
            out.write(sample_csv(spec, with_h0))
            if spec.gnuplot:
                with open(spec.gnuplot, "w") as fh:
                    fh.write(gnuplot_script(spec, with_h0))
        return EXIT_OK
    except CharburgError as err:
        print(f"charburg: {type(err).__name__}: {err}", file=sys.stderr)
        if spec.command == "verify":
            out.write(f"FAIL  {type(err).__name__}: {err}\n")
        return EXIT_DOMAIN
    except ValueError as err:
        print(f"charburg: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
