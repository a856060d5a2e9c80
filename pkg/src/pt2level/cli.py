"""Command-line sweeps emitting CSV or JSON tables.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (including an
``oracle-check`` that exceeds its tolerance).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import dynamics, exceptional, hamiltonian, meson
from .errors import NumericalError, PT2Error, ValidationError
from .hamiltonian import Broken, DerivedBrokenParams, PTParams, Symmetric

COMMANDS = (
    "classify",
    "eigen",
    "evolve",
    "probs",
    "cpt-probs",
    "meson",
    "decayed",
    "ep-scan",
    "fig1",
    "oracle-check",
)
ORACLE_TOL = 1e-10
# probabilities below this are compared absolutely (floor 1e-14 = 1e-10 * 1e-4)
ORACLE_REL_FLOOR = 1e-4

Row = dict[str, Any]


@dataclass(frozen=True)
class TimeGrid:
    t_min: float = 0.0
    t_max: float = 1.0
    n_points: int = 11

    def __post_init__(self):
        if self.n_points < 1:
            raise ValidationError("n must be at least 1")
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)):
            raise ValidationError("time bounds must be finite")
        if self.t_min < 0 or self.t_min > self.t_max:
            raise ValidationError("need 0 <= t_min <= t_max")

    def points(self) -> np.ndarray:
        if self.n_points == 1:
            return np.array([self.t_min])
        return np.linspace(self.t_min, self.t_max, self.n_points)


@dataclass(frozen=True)
class SweepSpec:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    t_grid: TimeGrid = TimeGrid()
    fmt: str = "csv"
    output: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise ValidationError(f"unknown format {self.fmt!r}")
        for key, value in self.params.items():
            values = value if isinstance(value, (list, tuple)) else [value]
            for v in values:
                if isinstance(v, float) and not math.isfinite(v):
                    raise ValidationError(f"parameter {key} must be finite")


class CheckFailed(NumericalError):
    """A self-check ran but exceeded its tolerance."""


# --- table builders -------------------------------------------------------


def _pt(params: dict, rho: float | None = None, varphi: float | None = None, sigma: float | None = None) -> PTParams:
    return PTParams(
        rho=params["rho"] if rho is None else rho,
        varphi=params["varphi"] if varphi is None else varphi,
        sigma=params["sigma"] if sigma is None else sigma,
        phi=params.get("phi", 0.0),
    )


def _grid_params(params: dict) -> Iterable[PTParams]:
    """Cartesian product of the (possibly multi-valued) rho, varphi, sigma."""
    for rho, varphi, sigma in itertools.product(params["rho"], params["varphi"], params["sigma"]):
        yield _pt(params, rho, varphi, sigma)


def _classify_rows(spec: SweepSpec) -> list[Row]:
    rows = []
    for p in _grid_params(spec.params):
        phase = hamiltonian.classify(p)
        rows.append(
            {
                "rho": p.rho,
                "varphi": p.varphi,
                "sigma": p.sigma,
                "phi": p.phi,
                "phase": hamiltonian.phase_tag(phase),
                "alpha": phase.alpha if isinstance(phase, Symmetric) else math.nan,
                "alpha_prime": phase.alpha_prime if isinstance(phase, Broken) else math.nan,
            }
        )
    return rows


def _eigen_rows(spec: SweepSpec) -> list[Row]:
    rows = []
    for p in _grid_params(spec.params):
        plus, minus = hamiltonian.eigenvalues(p)
        rows.append(
            {
                "rho": p.rho,
                "varphi": p.varphi,
                "sigma": p.sigma,
                "phase": hamiltonian.phase_tag(hamiltonian.classify(p)),
                "re_plus": plus.real,
                "im_plus": plus.imag,
                "re_minus": minus.real,
                "im_minus": minus.imag,
            }
        )
    return rows


def _broken(spec: SweepSpec) -> DerivedBrokenParams:
    return DerivedBrokenParams.from_pt(_pt(spec.params))


def _evolve_rows(spec: SweepSpec) -> list[Row]:
    d = _broken(spec)
    state = dynamics.FlavorState(spec.params["state"])
    rows = []
    for t in spec.t_grid.points():
        v = dynamics.evolve_flavor_state(state, d, float(t))
        re, im = v.real.tolist(), v.imag.tolist()
        rows.append({"t": float(t), "re_0": re[0], "im_0": im[0], "re_1": re[1], "im_1": im[1]})
    return rows


def _probs_rows(spec: SweepSpec) -> list[Row]:
    d = _broken(spec)
    rows = []
    for t in spec.t_grid.points():
        pr = dynamics.probabilities_pt(d, float(t))
        rows.append({"t": float(t), "Paa": pr.aa, "Pab": pr.ab, "Pba": pr.ba, "Pbb": pr.bb})
    return rows


def _cpt_probs_rows(spec: SweepSpec) -> list[Row]:
    d = _broken(spec)
    rows = []
    for t in spec.t_grid.points():
        pr = dynamics.probabilities_cpt_flavor(d, float(t))
        rows.append({"t": float(t), "Ptaa": pr.aa, "Ptab": pr.ab, "Ptba": pr.ba, "Ptbb": pr.bb})
    return rows


def load_meson_params(path: str) -> meson.MesonParams:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError("meson parameter file must hold a JSON object")
    return meson.MesonParams.from_json(data)


def _meson_rows(spec: SweepSpec) -> list[Row]:
    sol = meson.solve(load_meson_params(spec.params["params_file"]))
    rows = []
    for t in spec.t_grid.points():
        stay, flip = meson.transition_probabilities(sol, float(t))
        rows.append({"t": float(t), "Ppp": stay, "Ppbar": flip})
    return rows


def _decayed_rows(spec: SweepSpec) -> list[Row]:
    p = _pt(spec.params)
    chi = spec.params["chi"]
    rows = []
    for t in spec.t_grid.points():
        paa, pab = meson.decayed_probabilities(p, chi, float(t))
        rows.append({"t": float(t), "Paa": paa, "Pab": pab})
    return rows


def _ep_family(params: dict) -> Callable[[float], exceptional.EPCase]:
    case = params["case"]
    omega, gamma = params["omega"], params["gamma"]
    if case == "i":
        return lambda k: exceptional.CaseI(omega, params["gamma1"], params["gamma2"], k)
    if case == "ii":
        return lambda k: exceptional.CaseII(omega, gamma, params["chi"], k)
    if case == "iii":
        return lambda k: exceptional.CaseIII(omega, gamma, k)
    return lambda k: exceptional.CaseIV(omega, gamma, k)


def _ep_row(x_name: str, x: float, point: exceptional.EPPoint) -> Row:
    p = point.params
    return {
        x_name: x,
        "re_lambda": point.eigenvalue.real,
        "im_lambda": point.eigenvalue.imag,
        "omega1": p.omega1,
        "omega2": p.omega2,
        "gamma1": p.gamma1,
        "gamma2": p.gamma2,
        "kappa": p.kappa,
    }


def _ep_scan_rows(spec: SweepSpec) -> list[Row]:
    params = spec.params
    if params["case"] == "fig1":
        rows = []
        for xi in params["xi"]:
            for point in exceptional.fig1_ep_locus(xi, params["n"]):
                rows.append({"xi": xi, **_ep_row("sin_varphi", point.x, point)})
        return rows
    n = params["n"]
    if n < 2:
        raise ValidationError("ep-scan needs at least two grid points")
    grid = np.linspace(params["kappa_min"], params["kappa_max"], n)
    return [_ep_row("x", pt.x, pt) for pt in exceptional.ep_locus_scan(_ep_family(params), grid)]


def _fig1_rows(spec: SweepSpec) -> list[Row]:
    rows = []
    grid = exceptional.sin_grid(spec.params["n"])
    for xi in spec.params["xi"]:
        if not xi >= 0:
            raise ValidationError("xi must be non-negative")
        for s in grid:
            s = float(s)
            p = PTParams(rho=xi, varphi=math.asin(s), sigma=1.0)
            plus, minus = hamiltonian.eigenvalues(p)
            rows.append(
                {
                    "xi": xi,
                    "sin_varphi": s,
                    "re_plus": plus.real,
                    "im_plus": plus.imag,
                    "re_minus": minus.real,
                    "im_minus": minus.imag,
                    "phase": hamiltonian.phase_tag(hamiltonian.classify(p)),
                    "ep_locus": exceptional.ep_locus_curve(s),
                }
            )
    return rows


def sample_broken_params(rng: np.random.Generator, n: int) -> list[DerivedBrokenParams]:
    """Broken-phase draws: alpha' in [0.05, 3], gamma in [0.05, 2], omega in [-3, 3]."""
    out = []
    for _ in range(n):
        alpha_prime = rng.uniform(0.05, 3.0)
        gamma = rng.uniform(0.05, 2.0)
        omega = rng.uniform(-3.0, 3.0)
        out.append(DerivedBrokenParams(omega, gamma, alpha_prime))
    return out


def oracle_deviation(params: DerivedBrokenParams, n_times: int) -> tuple[float, float]:
    """Largest absolute and floored-relative gap between closed form and oracle on ``[0, 5/gamma]``."""
    worst_abs = worst_rel = 0.0
    for t in np.linspace(0.0, 5.0 / params.gamma, n_times):
        closed = dynamics.probabilities_pt(params, float(t))
        brute = dynamics.probabilities_pt_oracle(params, float(t))
        for c, b in zip(closed, brute):
            d = abs(c - b)
            worst_abs = max(worst_abs, d)
            worst_rel = max(worst_rel, d / max(abs(b), ORACLE_REL_FLOOR))
    return worst_abs, worst_rel


def _oracle_rows(spec: SweepSpec) -> list[Row]:
    n_params, n_times, jobs = spec.params["n_params"], spec.params["n_times"], spec.params["jobs"]
    if n_params < 1 or n_times < 1 or jobs < 1:
        raise ValidationError("n-params, n-times and jobs must be positive")
    draws = sample_broken_params(np.random.default_rng(spec.params["seed"]), n_params)
    if jobs == 1:
        devs = [oracle_deviation(d, n_times) for d in draws]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            devs = list(pool.map(oracle_deviation, draws, itertools.repeat(n_times)))
    max_abs = max(a for a, _ in devs)
    max_rel = max(r for _, r in devs)
    return [
        {
            "seed": spec.params["seed"],
            "n_params": n_params,
            "n_times": n_times,
            "max_abs_dev": max_abs,
            "max_rel_dev": max_rel,
            "passed": max_rel <= ORACLE_TOL,
        }
    ]


BUILDERS: dict[str, Callable[[SweepSpec], list[Row]]] = {
    "classify": _classify_rows,
    "eigen": _eigen_rows,
    "evolve": _evolve_rows,
    "probs": _probs_rows,
    "cpt-probs": _cpt_probs_rows,
    "meson": _meson_rows,
    "decayed": _decayed_rows,
    "ep-scan": _ep_scan_rows,
    "fig1": _fig1_rows,
    "oracle-check": _oracle_rows,
}


# --- serialization --------------------------------------------------------


def _csv_cell(value: Any) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.generic):
        return _json_value(value.item())
    return value


def render(rows: Sequence[Row], fmt: str) -> str:
    """CSV with a header row, or a JSON array of row objects.

    Floats use the shortest round-trip representation; non-finite values
    become ``null`` in JSON.
    """
    if fmt == "json":
        return json.dumps([{k: _json_value(v) for k, v in row.items()} for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow(_csv_cell(v) for v in row.values())
    return buf.getvalue()


def _destination(spec: SweepSpec) -> str | None:
    if spec.output:
        return spec.output
    out_dir = os.environ.get("PT2_OUTPUT_DIR")
    if out_dir:
        return os.path.join(out_dir, f"{spec.command}.{spec.fmt}")
    return None


def run(spec: SweepSpec) -> int:
    """Build the table for ``spec``, write it and return the exit code."""
    try:
        rows = BUILDERS[spec.command](spec)
        text = render(rows, spec.fmt)
        dest = _destination(spec)
        if dest is None:
            sys.stdout.write(text)
        else:
            parent = os.path.dirname(dest)
            if parent:
                os.makedirs(parent, exist_ok=True)
            with open(dest, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        if spec.command == "oracle-check" and not rows[0]["passed"]:
            raise CheckFailed(f"max relative deviation {rows[0]['max_rel_dev']:.3g} > {ORACLE_TOL:g}")
    except ValidationError as exc:
        _diagnose(exc)
        return 1
    except (NumericalError, OverflowError, ZeroDivisionError) as exc:
        _diagnose(exc)
        return 2
    except PT2Error as exc:
        _diagnose(exc)
        return 1
    return 0


def _diagnose(exc: BaseException) -> None:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


# --- argument parsing -----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: ValidationError: {message}\n")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="file path; defaults to $PT2_OUTPUT_DIR/<command>.<format> or stdout")


def _add_pt(p: argparse.ArgumentParser, many: bool = False) -> None:
    nargs = "+" if many else None
    p.add_argument("--rho", type=float, required=True, nargs=nargs)
    p.add_argument("--varphi", type=float, required=True, nargs=nargs)
    p.add_argument("--sigma", type=float, required=True, nargs=nargs)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--degrees", action="store_true", help="read varphi and phi in degrees")


def _add_time(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--n", type=int, default=11, help="number of time points")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pt2level", description="PT-symmetric two-level system sweeps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (("classify", "phase and angle"), ("eigen", "eigenvalues")):
        p = sub.add_parser(name, help=f"{help_text} over the product of the given rho, varphi, sigma values")
        _add_pt(p, many=True)
        _add_output(p)

    p = sub.add_parser("evolve", help="broken-phase evolution of a flavor state")
    _add_pt(p)
    p.add_argument("--state", choices=[s.value for s in dynamics.FlavorState], default="a")
    _add_time(p)
    _add_output(p)

    for name, help_text in (("probs", "PT-paired flavor probabilities"), ("cpt-probs", "CPT flavor probabilities")):
        p = sub.add_parser(name, help=help_text)
        _add_pt(p)
        _add_time(p)
        _add_output(p)

    p = sub.add_parser("meson", help="meson transition probabilities from a JSON parameter file")
    p.add_argument("--params", dest="params_file", required=True, help="JSON file or - for stdin")
    _add_time(p)
    _add_output(p)

    p = sub.add_parser("decayed", help="passive-PT decaying probabilities")
    _add_pt(p)
    p.add_argument("--chi", type=float, required=True)
    _add_time(p)
    _add_output(p)

    p = sub.add_parser("ep-scan", help="exceptional points along a coupling (or sin(varphi)) grid")
    p.add_argument("--case", choices=("i", "ii", "iii", "iv", "fig1"), required=True)
    p.add_argument("--omega", type=float, default=0.0, help="omega_0, omega or omega_p")
    p.add_argument("--gamma", type=float, default=0.0, help="gamma (ii, iii) or gamma_p (iv)")
    p.add_argument("--gamma1", type=float, default=0.0)
    p.add_argument("--gamma2", type=float, default=0.0)
    p.add_argument("--chi", type=float, default=0.0)
    p.add_argument("--kappa-min", type=float, default=0.0)
    p.add_argument("--kappa-max", type=float, default=2.0)
    p.add_argument("--xi", type=float, action="append", help="fig1 case; repeatable")
    p.add_argument("--n", type=int, default=401)
    _add_output(p)

    p = sub.add_parser("fig1", help="eigenvalues vs sin(varphi) at sigma = 1, rho = xi")
    p.add_argument("--xi", type=float, action="append", help="repeatable; default 2 3 4")
    p.add_argument("--n", type=int, default=401)
    _add_output(p)

    p = sub.add_parser("oracle-check", help="closed-form probabilities vs the brute-force exponential")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-params", type=int, default=200)
    p.add_argument("--n-times", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p)
    return parser


_TIMED = ("evolve", "probs", "cpt-probs", "meson", "decayed")
_NOT_PARAMS = {"command", "format", "output", "t_min", "t_max", "degrees"}


def spec_from_args(args: argparse.Namespace) -> SweepSpec:
    params = {k: v for k, v in vars(args).items() if k not in _NOT_PARAMS}
    if args.command in _TIMED:
        grid = TimeGrid(args.t_min, args.t_max, params.pop("n"))
    else:
        grid = TimeGrid()
    if getattr(args, "degrees", False):
        params["varphi"] = (
            [math.radians(v) for v in params["varphi"]]
            if isinstance(params["varphi"], list)
            else math.radians(params["varphi"])
        )
        params["phi"] = math.radians(params["phi"])
    if args.command in ("fig1", "ep-scan") and not params.get("xi"):
        params["xi"] = [2.0, 3.0, 4.0]
    return SweepSpec(command=args.command, params=params, t_grid=grid, fmt=args.format, output=args.output)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
    except ValidationError as exc:
        _diagnose(exc)
        return 1
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
