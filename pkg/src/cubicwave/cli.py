"""Command-line front end.

Every subcommand writes JSON (or CSV for tables and trajectories) to
``--out`` or standard output.  Exit status: 0 success, 1 computational
failure, 2 usage error.  Relative ``--out`` paths are resolved against
``$CUBICWAVE_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

SCHEMA = "1"
OUTPUT_DIR_ENV = "CUBICWAVE_OUTPUT_DIR"


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    format: str = "json"


# -- argument validation --------------------------------------------------------


def _int_at_least(lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v

    return conv


def _float_check(pred, desc: str):
    def conv(text: str) -> float:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
        if not math.isfinite(v) or not pred(v):
            raise argparse.ArgumentTypeError(f"must be {desc}, got {text}")
        return v

    return conv


_positive = _float_check(lambda v: v > 0, "> 0")
_nonneg = _float_check(lambda v: v >= 0, ">= 0")
_nonzero = _float_check(lambda v: v != 0, "nonzero")


def _free_datum(text: str) -> tuple:
    try:
        lam, val = text.split("=", 1)
        lam = int(lam)
        val = Fraction(val)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected ORDER=RATIONAL, got {text!r}")
    if lam < 2:
        raise argparse.ArgumentTypeError("free data orders start at 2")
    return lam, val


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cubicwave",
        description="Periodic solutions of a cubic wave equation: exact expansion and numerical checks.",
    )
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    def out_flag(sp):
        sp.add_argument("--out", help="output file (default: standard output)")

    c = sub.add_parser("coeffs", help="table of interaction coefficients as CSV")
    c.add_argument("--max-index", type=_int_at_least(0), default=4)
    c.add_argument("--nonzero-only", action="store_true")
    out_flag(c)

    def expansion_flags(sp):
        sp.add_argument("--order", type=_int_at_least(1), required=True)
        sp.add_argument(
            "--free-data", type=_free_datum, nargs="*", default=[], metavar="ORDER=VALUE",
            help="mode-0 initial amplitudes f_lam(0), e.g. 2=1/2",
        )
        sp.add_argument("--cutoff", type=_int_at_least(1), default=None,
                        help="keep modes below M only (default: automatic)")
        sp.add_argument("--probe-modes", type=_int_at_least(1), default=4,
                        help="modes m >= 1 whose data are forced at each order")
        out_flag(sp)

    for name, text in (
        ("expand", "mode polynomials, shifts and forced-data log as JSON"),
        ("shifts", "frequency shifts theta_0..theta_{L-1} as exact fractions"),
        ("residual", "exact residual check for every order and mode"),
    ):
        expansion_flags(sub.add_parser(name, help=text))

    op = sub.add_parser("ode-period", help="Duffing period by quadrature")
    op.add_argument("--x0", type=_nonzero, required=True)
    op.add_argument("--quad-points", type=_int_at_least(2), default=64)
    out_flag(op)

    oo = sub.add_parser("ode-orbit", help="Duffing orbit samples as CSV")
    oo.add_argument("--x0", type=float, required=True)
    oo.add_argument("--periods", type=_positive, default=1.0)
    oo.add_argument("--dt", type=_positive, default=1e-3)
    oo.add_argument("--every", type=_int_at_least(1), default=1, help="write every k-th step")
    out_flag(oo)

    ov = sub.add_parser("ode-verify", help="period by quadrature, first return and series")
    ov.add_argument("--x0", type=_nonzero, required=True)
    out_flag(ov)

    def pde_flags(sp):
        sp.add_argument("--epsilon", type=_nonneg, required=True)
        sp.add_argument("--order", type=_int_at_least(1), required=True)
        sp.add_argument("--modes", type=_int_at_least(1), default=32)
        sp.add_argument("--dt", type=_positive, default=1e-3)

    ps = sub.add_parser("pde-simulate", help="spectral simulation from series data, CSV")
    pde_flags(ps)
    ps.add_argument("--t-end", type=_nonneg, default=None, help="default: one predicted period")
    ps.add_argument("--every", type=_int_at_least(1), default=100, help="write every k-th step")
    out_flag(ps)

    pv = sub.add_parser("pde-verify", help="periodicity, energy drift and convergence slope")
    pde_flags(pv)
    out_flag(pv)
    return p


_CSV_COMMANDS = {"coeffs", "ode-orbit", "pde-simulate"}


def _normalize(argv: list) -> list:
    # accept "ode period" as well as "ode-period"
    if len(argv) >= 2 and argv[0] in ("ode", "pde") and not argv[1].startswith("-"):
        return [f"{argv[0]}-{argv[1]}"] + argv[2:]
    return argv


def parse_args(argv: list) -> RunConfig:
    """Parse and validate; raises ``SystemExit(2)`` on usage errors."""
    ns = _build_parser().parse_args(_normalize(list(argv)))
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "out")}
    if "free_data" in params:
        params["free_data"] = dict(params["free_data"])
    fmt = "csv" if ns.subcommand in _CSV_COMMANDS else "json"
    return RunConfig(ns.subcommand, params, ns.out, fmt)


# -- execution ------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(x)


def _g(x: float) -> str:
    return "%.17g" % x


def _expansion(params: dict):
    from .resonant import EngineConfig, expand

    cfg = EngineConfig(probe_modes=params["probe_modes"], cutoff=params["cutoff"])
    return expand(params["order"], params["free_data"], cfg)


def _cmd_coeffs(p: dict) -> str:
    from .modes import coefficient_table

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "k", "m", "value"])
    w.writerows(coefficient_table(p["max_index"], p["nonzero_only"]))
    return buf.getvalue()


def _cmd_expand(p: dict) -> dict:
    state = _expansion(p)
    modes: dict = {}
    for (lam, m), poly in sorted(state.polys.items()):
        modes.setdefault(str(lam), {})[str(m)] = poly.to_records()
    return {
        "order": state.max_order,
        "thetas": [_frac(t) for t in state.thetas],
        "free_data": {str(k): _frac(v) for k, v in sorted(state.free_data.items())},
        "modes": modes,
        "forced_data_log": [r.to_dict() for r in state.forced_log],
    }


def _cmd_shifts(p: dict) -> dict:
    state = _expansion(p)
    return {"order": state.max_order, "thetas": [_frac(t) for t in state.thetas]}


def _cmd_residual(p: dict) -> tuple:
    from .resonant import residual

    state = _expansion(p)
    modes = sorted(set(state.active_modes()) | set(range(p["probe_modes"] + 1)))
    rows = []
    for lam in range(1, state.max_order + 1):
        for m in modes:
            r = residual(state, lam, m)
            rows.append({"order": lam, "mode": m, "pass": not r, "residual": r.to_text()})
    ok = all(r["pass"] for r in rows)
    return {"order": state.max_order, "all_pass": ok, "results": rows}, 0 if ok else 1


def _cmd_ode_period(p: dict) -> dict:
    from .duffing import period

    return {"x0": p["x0"], "period": period(p["x0"], p["quad_points"])}


def _cmd_ode_orbit(p: dict) -> str:
    from .duffing import integrate, period

    x0 = p["x0"]
    T = period(x0) if x0 != 0 else 2 * math.pi
    orbit = integrate(x0, p["periods"] * T, p["dt"])
    e = orbit.energy
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "X", "Y", "energy"])
    for i in range(0, len(orbit.t), p["every"]):
        w.writerow([_g(orbit.t[i]), _g(orbit.X[i]), _g(orbit.Y[i]), _g(e[i])])
    return buf.getvalue()


def _cmd_ode_verify(p: dict) -> dict:
    from .duffing import verify

    return verify(p["x0"])


def _pde_state(p: dict):
    from .resonant import expand

    return expand(p["order"])


def _cmd_pde_simulate(p: dict) -> str:
    from .pdesim import energy_report, project_initial, simulate

    state = _pde_state(p)
    eps = p["epsilon"]
    s0 = project_initial(state, eps, p["modes"])
    t_end = p["t_end"] if p["t_end"] is not None else 2 * math.pi / state.frequency(eps)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"a_{m}" for m in range(p["modes"])] + ["energy"])
    count = [0]

    def row(s):
        w.writerow([_g(s.t)] + [_g(x) for x in s.a] + [_g(energy_report(s).total)])

    def record(s):
        if count[0] % p["every"] == 0:
            row(s)
        count[0] += 1

    final = simulate(s0, t_end, p["dt"], callback=record)
    if (count[0] - 1) % p["every"]:
        row(final)
    return buf.getvalue()


def _cmd_pde_verify(p: dict) -> dict:
    from .pdesim import convergence_slope, periodicity_run

    state = _pde_state(p)
    eps = p["epsilon"]
    main = periodicity_run(state, eps, p["modes"], p["dt"])
    report = {
        "epsilon": eps,
        "order": p["order"],
        "modes": p["modes"],
        "dt": p["dt"],
        "period": main.period,
        "periodicity_error": main.error,
        "energy_drift": main.energy_drift,
    }
    if eps > 0:
        grid = [2 * eps, eps, eps / 2]
        errs = [periodicity_run(state, e, p["modes"], p["dt"]).error for e in grid]
        errs[1] = main.error
        slope = convergence_slope(grid, errs) if all(e > 0 for e in errs) else float("nan")
        expected = p["order"] + 1
        report["slope_test"] = {
            "epsilons": grid,
            "errors": errs,
            "slope": slope,
            "expected": expected,
            "pass": bool(abs(slope - expected) <= 0.5),
        }
    return report


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "expand": _cmd_expand,
    "shifts": _cmd_shifts,
    "residual": _cmd_residual,
    "ode-period": _cmd_ode_period,
    "ode-orbit": _cmd_ode_orbit,
    "ode-verify": _cmd_ode_verify,
    "pde-simulate": _cmd_pde_simulate,
    "pde-verify": _cmd_pde_verify,
}


def _dump(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True) + "\n"


def _resolve(path: str) -> str:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path = _resolve(path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def execute(config: RunConfig) -> int:
    from .pdesim import SimulationError
    from .resonant import ExpansionError
    from .duffing import ClosureError

    status = 0
    try:
        result = _COMMANDS[config.subcommand](config.params)
    except (ExpansionError, SimulationError, ClosureError, ValueError, ArithmeticError) as exc:
        if config.format == "json":
            _emit(_dump({"error": f"{type(exc).__name__}: {exc}"}), config.output_path)
        else:
            sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    if isinstance(result, tuple):
        result, status = result
    text = result if isinstance(result, str) else _dump(result)
    _emit(text, config.output_path)
    return status


def main(argv: Optional[list] = None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return execute(config)


if __name__ == "__main__":
    sys.exit(main())
