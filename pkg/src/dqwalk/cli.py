"""Command-line experiment runner.

Three subcommands: ``spectrum`` analyzes the one-step channel's
superoperator, ``evolve`` simulates a trajectory with entropy diagnostics,
``verify-all`` measures the twelve built-in claims.  Runs are configured by
a JSON file plus flag overrides; outputs are written under a path prefix as
machine-readable CSV/JSON, a human-readable summary, and (unless disabled)
rendered figures.

Exit codes: 0 success, 1 invalid configuration or input, 2 numerical
failure (solver breakdown, non-convergence, failed verification).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    EPSILON_DEFAULT,
    MAX_STEPS_DEFAULT,
    convergence_report,
    evolve,
    parity_overlap,
    trajectory_csv,
)
from .entropy import entanglement_trajectory
from .errors import EigenSolverError, NumericalError, ValidationError
from .quantum import DensityMatrix
from .spectral import (
    check_orthogonality,
    check_unit_eigenoperator_conditions,
    matricize,
    peripheral_spectrum,
    verify_eigenspace_structure,
)
from .verify import run_acceptance
from .walk import WalkSpec, build_channel, walk_from_json, walk_to_json

MODES = ("spectrum", "evolve", "verify-all")

#: Environment variable capping the number of evolution steps.
MAX_T_ENV = "DQWALK_MAX_T"


@dataclass
class RunConfig:
    """Fully resolved run parameters after merging file and flags."""

    spec: WalkSpec
    rho0: DensityMatrix
    initial_desc: dict
    steps: int | None
    epsilon: float
    out: str
    fmt: str
    seed: int
    render_plots: bool
    walk_given: bool


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors follow the exit-code contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dqwalk",
        description="Decoherent quantum walks on the N-cycle: spectra, "
        "trajectories, and claim verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, help_text in (
        ("spectrum", "superoperator peripheral spectrum and structure checks"),
        ("evolve", "trajectory simulation with entropy diagnostics"),
        ("verify-all", "measure all twelve built-in claims"),
    ):
        p = sub.add_parser(command, help=help_text)
        p.add_argument("--config", help="JSON run configuration file")
        p.add_argument("--n", type=int, help="override cycle length N")
        p.add_argument("--q", type=float, help="override measurement probability q")
        p.add_argument(
            "--steps", type=int,
            help="number of steps (evolve: exact count, disables early exit; "
            "verify-all: cap on iteration counts)",
        )
        p.add_argument("--epsilon", type=float, help="convergence threshold")
        p.add_argument("--out", help="output path prefix (default dqwalk_run)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="trajectory table format (default csv)")
        p.add_argument("--seed", type=int, help="seed for randomized checks")
        p.add_argument("--no-plots", action="store_true",
                       help="skip figure rendering")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValidationError("config file must contain a JSON object")
    mode = data.get("mode")
    if mode is not None and mode not in MODES:
        raise ValidationError(f"config mode {mode!r} not one of {MODES}")

    walk_data = data.get("walk")
    walk_given = walk_data is not None or args.n is not None or args.q is not None
    if walk_data is None:
        walk_data = {"N": 5, "q": 0.2, "coin": {"kind": "hadamard"}}
    elif not isinstance(walk_data, dict):
        raise ValidationError("config walk entry must be a JSON object")
    else:
        walk_data = dict(walk_data)
    if args.n is not None:
        walk_data["N"] = args.n
    if args.q is not None:
        walk_data["q"] = args.q
    spec, rho0 = walk_from_json(walk_data)

    steps = args.steps if args.steps is not None else data.get("steps")
    if steps is not None:
        steps = int(steps)
        if steps < 0:
            raise ValidationError(f"steps must be >= 0, got {steps}")
    epsilon = float(
        args.epsilon if args.epsilon is not None else data.get("epsilon", EPSILON_DEFAULT)
    )
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    out = args.out if args.out is not None else data.get("output", "dqwalk_run")
    fmt = args.format if args.format is not None else data.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ValidationError(f"format must be csv or json, got {fmt!r}")
    seed = int(args.seed if args.seed is not None else data.get("seed", 0))
    render_plots = bool(data.get("plots", True)) and not args.no_plots
    return RunConfig(
        spec=spec,
        rho0=rho0,
        initial_desc=walk_data.get("initial", {"kind": "node", "x": 0, "coin": "r"}),
        steps=steps,
        epsilon=epsilon,
        out=out,
        fmt=fmt,
        seed=seed,
        render_plots=render_plots,
        walk_given=walk_given,
    )


def max_t_cap() -> int | None:
    """Step cap from the environment, if set."""
    raw = os.environ.get(MAX_T_ENV)
    if raw is None:
        return None
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"{MAX_T_ENV}={raw!r} is not an integer") from exc
    if cap < 0:
        raise ValidationError(f"{MAX_T_ENV} must be >= 0, got {cap}")
    return cap


# --- deterministic serialization ---------------------------------------------


def json_text(value, indent: int = 0) -> str:
    """Render JSON with floats at a fixed 17-significant-digit precision.

    The stock serializer uses shortest-round-trip floats; pinning the
    precision keeps byte-identical outputs across runs and platforms, which
    golden-file comparisons rely on.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {json_text(v, indent + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        items = [f"{inner}{json_text(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value):
            raise ValidationError(f"cannot serialize non-finite float {value}")
        return "%.17g" % value
    if isinstance(value, str):
        return json.dumps(value)
    raise ValidationError(f"cannot serialize {type(value).__name__} to JSON")


def _write(path: str, text: str) -> str:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _format_eigenvalue(lam: complex) -> str:
    if abs(lam.imag) < 1e-7 and abs(lam.real - round(lam.real)) < 1e-7:
        return str(int(round(lam.real)))
    return f"{lam.real:.9g}{lam.imag:+.9g}j"


def _coin_label(config: RunConfig) -> str:
    coin = config.spec.coin
    if abs(coin.u11 - 1 / np.sqrt(2)) < 1e-12 and abs(coin.u21 - 1 / np.sqrt(2)) < 1e-12:
        return "hadamard"
    return f"theta={np.arctan2(abs(coin.u12), abs(coin.u11)):.6g}"


# --- subcommands -------------------------------------------------------------


def run_spectrum(config: RunConfig) -> int:
    spec = config.spec
    channel = build_channel(spec)
    superop = matricize(channel)
    report = peripheral_spectrum(superop)
    structure = verify_eigenspace_structure(report, spec.n)
    ortho = check_orthogonality(report)

    lines = [
        f"walk: N={spec.n} q={spec.q:g} coin={_coin_label(config)}",
        "peripheral: {%s}" % ", ".join(
            _format_eigenvalue(lam) for lam in report.distinct_eigenvalues()
        ),
        f"interior max modulus: {report.interior_max_modulus:.12g}",
        f"eigenspace structure: {'PASS' if structure.passed else 'FAIL'} ({structure.detail})",
    ]
    for mode in report.peripheral:
        rep = check_unit_eigenoperator_conditions(
            channel, mode.eigenmatrix, mode.eigenvalue, tol=1e-7
        )
        verdict = "PASS" if rep.forward_pass and rep.backward_pass else "FAIL"
        worst = max(
            rep.intertwine_residuals + rep.noise_residuals + (rep.eigen_residual,)
        )
        lines.append(
            f"eigen-conditions lam={_format_eigenvalue(mode.eigenvalue)}: {verdict} "
            f"(forward={rep.forward_pass} backward={rep.backward_pass} "
            f"worst residual {worst:.3e})"
        )
    if ortho.pairs_checked:
        lines.append(
            f"orthogonality: {'PASS' if ortho.passed else 'FAIL'} "
            f"(max overlap {ortho.max_overlap:.3e} over {ortho.pairs_checked} pairs)"
        )
    else:
        lines.append("orthogonality: PASS (vacuous, single peripheral eigenvalue)")

    json_path = _write(config.out + "_spectrum.json", json_text(report.to_json()) + "\n")
    txt_path = _write(config.out + "_summary.txt", "\n".join(lines) + "\n")
    written = [json_path, txt_path]
    if config.render_plots:
        from . import plots

        written.append(plots.plot_spectrum(
            np.linalg.eigvals(superop.mat), report, config.out + "_spectrum.png"
        ))
    for line in lines:
        print(line)
    print("wrote: " + ", ".join(written))
    return 0 if structure.passed and ortho.passed else 2


def _limit_description(config: RunConfig) -> str:
    spec = config.spec
    if spec.n % 2 == 1:
        return f"maximally mixed state I/{spec.dim}"
    c = parity_overlap(config.rho0, spec.n)
    return (
        f"I/{spec.dim} + (-1)^t * (c/{spec.dim}) * alternating sign operator "
        f"with c = {c:.12g}"
    )


def run_evolve(config: RunConfig) -> int:
    spec = config.spec
    cap = max_t_cap()
    if config.steps is not None:
        total = config.steps if cap is None else min(config.steps, cap)
        stop = None
    else:
        total = MAX_STEPS_DEFAULT if cap is None else min(MAX_STEPS_DEFAULT, cap)
        stop = config.epsilon
    traj = evolve(spec, config.rho0, total, stop_below=stop)
    records = entanglement_trajectory(traj)
    summary = convergence_report(traj, config.epsilon)

    if config.fmt == "csv":
        table_path = _write(config.out + "_trajectory.csv", trajectory_csv(traj, records))
    else:
        header = (
            ["t", "distance_to_limit"]
            + [f"P_{x}" for x in range(spec.n)]
            + ["c_t", "S_total", "S_coin", "S_walker", "mutual_info"]
        )
        rows = [
            [t, traj.distance_to_limit[t]]
            + [float(p) for p in traj.position_dist[t]]
            + [
                float(traj.parity_overlap[t]),
                records[t].s_joint,
                records[t].s_coin,
                records[t].s_walker,
                records[t].mutual_info,
            ]
            for t in range(len(traj.states))
        ]
        table_path = _write(
            config.out + "_trajectory.json",
            json_text({"columns": header, "rows": rows}) + "\n",
        )

    def tail_json(stats):
        return {
            "final_distance": stats.final_distance,
            "first_t_below": stats.first_t_below,
            "tail_sup": stats.tail_sup,
        }

    summary_data = {
        "walk": walk_to_json(spec, config.initial_desc),
        "epsilon": config.epsilon,
        "steps": traj.steps,
        "first_t_below": summary.overall.first_t_below,
        "final_distance": summary.overall.final_distance,
        "final_mutual_info": records[-1].mutual_info,
        "limit_state_description": _limit_description(config),
    }
    if summary.even_steps is not None:
        summary_data["parity"] = {
            "even_steps": tail_json(summary.even_steps),
            "odd_steps": tail_json(summary.odd_steps),
        }
    summary_path = _write(config.out + "_summary.json", json_text(summary_data) + "\n")
    written = [table_path, summary_path]

    if config.render_plots:
        from . import plots

        radius = 0.0
        if spec.dim * spec.dim <= 4096:
            radius = peripheral_spectrum(matricize(build_channel(spec))).interior_max_modulus
        written.append(plots.plot_convergence(
            traj, records, radius, config.out + "_convergence.png"
        ))
        written.append(plots.plot_distributions(traj, config.out + "_distributions.png"))

    print(
        f"evolved N={spec.n} q={spec.q:g} for {traj.steps} steps; "
        f"final distance {summary.overall.final_distance:.6e}; "
        f"first t below {config.epsilon:g}: {summary.overall.first_t_below}"
    )
    print("wrote: " + ", ".join(written))
    return 0


def run_verify_all(config: RunConfig) -> int:
    cap = max_t_cap()
    max_t = config.steps if config.steps is not None else 10_000
    if cap is not None:
        max_t = min(max_t, cap)
    configs = [config.spec] if config.walk_given else None
    results = run_acceptance(configs, seed=config.seed, max_t=max_t)
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(
        "ALL CRITERIA PASSED" if not failed
        else f"{len(failed)} CRITERIA FAILED: {', '.join(str(r.number) for r in failed)}"
    )
    _write(config.out + "_verify.txt", "\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return 0 if not failed else 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
        if args.command == "spectrum":
            return run_spectrum(config)
        if args.command == "evolve":
            return run_evolve(config)
        return run_verify_all(config)
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"dqwalk: error: {exc}", file=sys.stderr)
        return 1
    except EigenSolverError as exc:
        note = f" ({len(exc.partial)} eigenpairs recovered)" if exc.partial else ""
        print(f"dqwalk: numerical failure: {exc}{note}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"dqwalk: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
