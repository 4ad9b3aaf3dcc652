"""Command-line interface.

Subcommands: ``state`` (inspect a state spec), ``match`` (solve a family
parameter for a target measure), ``evolve`` (sanity report + negativity of an
evolved state), ``tg`` (Gaussian separation time), ``sweep`` (CSV over a B/A
grid), ``fig1`` (the built-in five-case pipeline: four CSV tables + SVG).

Exit codes: 0 success, 1 usage error, 2 numerical-policy failure (cutoff,
convergence, monotonicity, or a failing ``--check``).  Per-point pipeline
failures inside a sweep do not abort the run; they appear as ``error=`` rows.
"""

import argparse
import json
import math
import sys

from .channel import ChannelParams, energy_closed_form, evolve_pnes
from .entanglement import negativity
from .errors import (ConvergenceError, CutoffError, MonotonicityError, StateSpecError,
                     TargetRangeError)
from .fock import DEFAULT_TOLERANCES, mean_total_photons, sanity_check
from .gaussian import t_g_closed, t_g_numeric
from .states import (MEASURES, MatchTarget, family_at_cutoff, parse_state_spec,
                     pnes_energy, psi01_coeffs, pssv_coeffs, pure_entropy,
                     pure_entropy_bits, pure_negativity, solve_family_param, twb_coeffs)
from .sweep import (CONV_CHECK_STEP, CONV_TOL, SweepConfig, SweepPointError,
                    matched_twb_lambda, render_csv, run_fig1, run_sweep)

T_G_CHECK_TOL = 1e-9

_FAMILY_BUILDERS = {"twb": twb_coeffs, "pssv": pssv_coeffs, "psi01": psi01_coeffs}

_CONFIG_KEYS = frozenset((
    "state_spec", "match_kind", "b_over_a_grid", "gamma", "entanglement_measure",
    "cutoff", "cutoff_floor", "cutoff_cap", "check", "out",
))


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract reserves 2 for
    numerical-policy failures, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def _channel_from_args(args) -> ChannelParams:
    if args.b_over_a is not None:
        return ChannelParams.from_b_over_a(args.b_over_a, gamma=args.gamma)
    return ChannelParams(gamma=args.gamma, n_t=args.nt)


def _print_measures(coeffs) -> None:
    print(f"energy: {_fmt(pnes_energy(coeffs))}")
    print(f"negativity: {_fmt(pure_negativity(coeffs))}")
    print(f"entropy_nats: {_fmt(pure_entropy(coeffs))}")
    print(f"entropy_bits: {_fmt(pure_entropy_bits(coeffs))}")


# -- subcommands -------------------------------------------------------------

def cmd_state(args) -> int:
    coeffs = parse_state_spec(args.spec, cutoff=args.cutoff)
    print(f"family: {coeffs.family}")
    if coeffs.param is not None:
        print(f"param: {_fmt(coeffs.param)}")
    print(f"cutoff: {coeffs.cutoff}")
    print(f"truncation_loss: {_fmt(coeffs.truncation_loss)}")
    _print_measures(coeffs)
    print("coefficients:")
    for n, c in enumerate(coeffs.coeffs):
        print(f"  {n}: {_fmt(complex(c) if coeffs.coeffs.dtype.kind == 'c' else float(c))}")
    if args.check:
        # Informational only: families with infinite tails shift their pure
        # measures by about the tail weight when the cutoff grows.
        bigger = family_at_cutoff(coeffs, coeffs.cutoff + CONV_CHECK_STEP)
        print(f"check_cutoff: {bigger.cutoff}")
        print(f"check_energy_delta: {_fmt(abs(pnes_energy(bigger) - pnes_energy(coeffs)))}")
        print(f"check_negativity_delta: {_fmt(abs(pure_negativity(bigger) - pure_negativity(coeffs)))}")
        print(f"check_entropy_delta: {_fmt(abs(pure_entropy(bigger) - pure_entropy(coeffs)))}")
    return 0


def cmd_match(args) -> int:
    if args.family not in _FAMILY_BUILDERS:
        raise StateSpecError(f"no solvable family named {args.family!r}")
    kind, _, raw = args.target.partition("=")
    if kind not in MEASURES or not raw:
        raise StateSpecError(f"target must look like '<measure>=<value>' with measure in "
                             f"{MEASURES}, got {args.target!r}")
    target = MatchTarget(kind, float(raw))
    param = solve_family_param(args.family, target, cutoff=args.cutoff)
    coeffs = _FAMILY_BUILDERS[args.family](param, *(() if args.cutoff is None else (args.cutoff,)))
    print(f"family: {args.family}")
    print(f"param: {_fmt(param)}")
    if args.family == "twb":
        print(f"r: {_fmt(math.atanh(param))}")
    print(f"cutoff: {coeffs.cutoff}")
    _print_measures(coeffs)
    if args.check:
        again = solve_family_param(args.family, target, cutoff=coeffs.cutoff + CONV_CHECK_STEP)
        print(f"check_cutoff: {coeffs.cutoff + CONV_CHECK_STEP}")
        print(f"check_param_delta: {_fmt(abs(again - param))}")
    return 0


def cmd_evolve(args) -> int:
    coeffs = parse_state_spec(args.spec)
    params = _channel_from_args(args)
    state = evolve_pnes(coeffs, params, args.t, cutoff=args.cutoff)
    report = sanity_check(state, DEFAULT_TOLERANCES)
    result = negativity(state)
    energy = mean_total_photons(state)
    print(f"cutoff: {state.dim}")
    print(f"trace_deviation: {_fmt(report.trace_deviation)}")
    print(f"hermiticity_deviation: {_fmt(report.hermiticity_deviation)}")
    print(f"min_eigenvalue: {_fmt(report.min_eigenvalue)}")
    print(f"tail_bound: {_fmt(report.tail_bound)}")
    print(f"sanity_ok: {_fmt(report.ok)}")
    print(f"energy: {_fmt(energy)}")
    print(f"energy_closed_form: {_fmt(energy_closed_form(pnes_energy(coeffs), params, args.t))}")
    print(f"negativity: {_fmt(result.value)}")
    print(f"pt_min_eigenvalue: {_fmt(result.min_eigenvalue)}")
    print(f"block_path_used: {_fmt(result.block_path_used)}")
    if args.check:
        bumped = evolve_pnes(coeffs, params, args.t, cutoff=state.dim + CONV_CHECK_STEP)
        delta = abs(negativity(bumped).value - result.value)
        print(f"check_cutoff: {state.dim + CONV_CHECK_STEP}")
        print(f"check_negativity_delta: {_fmt(delta)}")
        if delta > CONV_TOL:
            print(f"error: negativity moved {delta:.3e} (> {CONV_TOL:.1e}) under cutoff "
                  f"doubling check", file=sys.stderr)
            return 2
    return 0


def cmd_tg(args) -> int:
    if (args.r is None) == (args.state is None):
        raise StateSpecError("provide exactly one of --r or --state")
    params = _channel_from_args(args)
    if args.r is not None:
        r = args.r
    else:
        coeffs = parse_state_spec(args.state)
        lam = matched_twb_lambda(coeffs, args.match_kind, args.measure)
        r = math.atanh(lam)
        print(f"lambda_matched: {_fmt(lam)}")
    print(f"r: {_fmt(r)}")
    print(f"n_t: {_fmt(params.n_t)}")
    print(f"gamma: {_fmt(params.gamma)}")
    t_g = t_g_closed(r, params)
    print(f"t_g: {_fmt(t_g)}")
    if args.check:
        if math.isinf(t_g) or t_g == 0.0:
            print("check_rel_delta: skipped (no finite positive root)")
            return 0
        numeric = t_g_numeric(r, params)
        rel = abs(numeric - t_g) / t_g
        print(f"check_numeric: {_fmt(numeric)}")
        print(f"check_rel_delta: {_fmt(rel)}")
        if rel > T_G_CHECK_TOL:
            print(f"error: closed-form and numeric separation times differ by {rel:.3e} "
                  f"relative (> {T_G_CHECK_TOL:.1e})", file=sys.stderr)
            return 2
    return 0


def _parse_grid(text: str) -> tuple:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _merged_sweep_config(args, spec_required: bool = True) -> SweepConfig:
    values = {}
    if getattr(args, "config", None):
        with open(args.config) as handle:
            loaded = json.load(handle)
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - _CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        values.update(loaded)
    overrides = {
        "state_spec": getattr(args, "spec", None),
        "match_kind": getattr(args, "match_kind", None),
        "b_over_a_grid": _parse_grid(args.grid) if getattr(args, "grid", None) else None,
        "gamma": getattr(args, "gamma", None),
        "entanglement_measure": getattr(args, "measure", None),
        "cutoff": getattr(args, "cutoff", None),
        "cutoff_floor": getattr(args, "cutoff_floor", None),
        "cutoff_cap": getattr(args, "cutoff_cap", None),
        "check": getattr(args, "check", None),
        "out": getattr(args, "out", None),
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    if not values.get("state_spec"):
        if not spec_required:
            values["state_spec"] = "psi01:c1sq=0.5"
        else:
            raise ValueError("a state spec is required (positional argument or "
                             "'state_spec' in the config file)")
    return SweepConfig(**values)


def _check_failures(records) -> int:
    return sum(1 for r in records
               if not isinstance(r, SweepPointError)
               and r.conv_delta is not None and r.conv_delta > CONV_TOL)


def cmd_sweep(args) -> int:
    config = _merged_sweep_config(args, spec_required=True)
    records = run_sweep(config)
    text = render_csv(records)
    if config.out:
        with open(config.out, "w") as handle:
            handle.write(text)
        print(f"wrote {config.out}")
    else:
        sys.stdout.write(text)
    errors = sum(1 for r in records if isinstance(r, SweepPointError))
    if errors:
        print(f"warning: {errors} grid point(s) recorded errors", file=sys.stderr)
    failed = _check_failures(records)
    if failed:
        print(f"error: convergence-doubling check failed at {failed} point(s)",
              file=sys.stderr)
        return 2
    return 0


def cmd_fig1(args) -> int:
    config = _merged_sweep_config(args, spec_required=False)
    out_dir = config.out or "."
    result = run_fig1(out_dir=out_dir, config=config, svg=not args.no_svg)
    for path in result.csv_paths:
        print(f"wrote {path}")
    if result.svg_path:
        print(f"wrote {result.svg_path}")
    all_records = [r for recs in result.records.values() for r in recs]
    errors = sum(1 for r in all_records if isinstance(r, SweepPointError))
    if errors:
        print(f"warning: {errors} grid point(s) recorded errors", file=sys.stderr)
    failed = _check_failures(all_records)
    if failed:
        print(f"error: convergence-doubling check failed at {failed} point(s)",
              file=sys.stderr)
        return 2
    return 0


# -- parser ------------------------------------------------------------------

def _add_channel_flags(sub, with_time: bool) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--nt", type=float, help="thermal occupation N_T of the bath")
    group.add_argument("--b-over-a", type=float, help="bath parameter B/A = N_T/(1+N_T)")
    sub.add_argument("--gamma", type=float, default=1.0, help="damping rate (default 1.0)")
    if with_time:
        sub.add_argument("--t", type=float, required=True, help="evolution time")


def _add_sweep_flags(sub, with_spec: bool) -> None:
    if with_spec:
        sub.add_argument("spec", nargs="?", help="state spec (mini-grammar)")
    sub.add_argument("--config", help="JSON file with SweepConfig fields (flags override)")
    sub.add_argument("--match-kind", choices=("energy", "entanglement", "both"))
    sub.add_argument("--grid", help="comma-separated B/A values, strictly increasing in (0,1)")
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--measure", choices=("entropy", "negativity"),
                     help="entanglement-matching measure (default entropy)")
    sub.add_argument("--cutoff", type=int, help="fixed Fock cutoff (overrides the policy)")
    sub.add_argument("--cutoff-floor", type=int)
    sub.add_argument("--cutoff-cap", type=int)
    sub.add_argument("--check", action="store_const", const="all", dest="check",
                     help="run the convergence-doubling check at every grid point")
    sub.add_argument("--no-check", action="store_const", const="off", dest="check",
                     help="disable the convergence-doubling check entirely")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pnesim",
                     description="Photon-number entangled states in a thermal lossy "
                                 "channel: negativity, Gaussian references, sweeps.")
    subs = parser.add_subparsers(dest="command", required=True)

    state = subs.add_parser("state", parents=[], help="inspect a state spec",
                            description="Coefficients, energy, negativity, entropy of a "
                                        "state spec such as twb:lambda=0.5 or pssv:energy=0.026.")
    state.add_argument("spec")
    state.add_argument("--cutoff", type=int)
    state.add_argument("--check", action="store_true",
                       help="report measure shifts at a larger cutoff (informational)")
    state.set_defaults(func=cmd_state)

    match = subs.add_parser("match", help="solve a family parameter for a target measure")
    match.add_argument("family", help="twb, pssv, or psi01")
    match.add_argument("target", help="<measure>=<value>, e.g. energy=0.6 or entropy=0.3")
    match.add_argument("--cutoff", type=int)
    match.add_argument("--check", action="store_true",
                       help="re-solve at a larger cutoff and report the parameter shift")
    match.set_defaults(func=cmd_match)

    evolve = subs.add_parser("evolve", help="evolve a state and report sanity + negativity")
    evolve.add_argument("spec")
    _add_channel_flags(evolve, with_time=True)
    evolve.add_argument("--cutoff", type=int)
    evolve.add_argument("--check", action="store_true",
                        help="fail (exit 2) if negativity moves more than 1e-8 at cutoff+4")
    evolve.set_defaults(func=cmd_evolve)

    tg = subs.add_parser("tg", help="Gaussian separation time")
    tg.add_argument("--r", type=float, help="twin-beam squeezing parameter")
    tg.add_argument("--state", help="state spec; the twin-beam reference is matched to it")
    tg.add_argument("--match-kind", choices=("energy", "entanglement"), default="energy")
    tg.add_argument("--measure", choices=("entropy", "negativity"), default="entropy")
    _add_channel_flags(tg, with_time=False)
    tg.add_argument("--check", action="store_true",
                    help="fail (exit 2) if the numeric root deviates beyond 1e-9 relative")
    tg.set_defaults(func=cmd_tg)

    sweep = subs.add_parser("sweep", help="residual-negativity sweep over a B/A grid (CSV)")
    _add_sweep_flags(sweep, with_spec=True)
    sweep.add_argument("--out", help="CSV output path (default: stdout)")
    sweep.set_defaults(func=cmd_sweep)

    fig1 = subs.add_parser("fig1", help="built-in five-case pipeline: four CSV tables + SVG")
    _add_sweep_flags(fig1, with_spec=False)
    fig1.add_argument("--out", help="output directory (default: current directory)")
    fig1.add_argument("--no-svg", action="store_true", help="skip the SVG rendering")
    fig1.set_defaults(func=cmd_fig1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except (StateSpecError, TargetRangeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CutoffError, ConvergenceError, MonotonicityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
