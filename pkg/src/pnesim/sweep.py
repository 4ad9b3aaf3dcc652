"""Sweep driver: residual negativity of an evolving PNES at the separation
time of its matched Gaussian twin-beam reference, across a grid of B/A.

For every grid point the pipeline is: N_T from B/A; twin-beam reference
matched to the state's initial energy and/or entanglement; the Gaussian
separation time t_G in closed form; the state evolved to t_G; residual
negativity N_R; the pure-Gaussian reference negativity N_G at the evolved
energy; and the ratios N_R/N_G and N_R/N_0.

The channel defines a one-parameter family per grid point, so records carry
everything needed to reproduce them; CSV output is byte-deterministic
(12 significant digits).
"""

import math
from dataclasses import dataclass, replace

from scipy.constants import Boltzmann, Planck

from .channel import (ChannelParams, TRACE_LEAK_TOL, CUTOFF_FLOOR, energy_closed_form,
                      evolve_pnes, policy_cutoff, support_dim)
from .entanglement import negativity
from .errors import PnesimError
from .gaussian import reference_ng, t_g_closed
from .states import (MatchTarget, PnesCoefficients, parse_state_spec, pnes_energy,
                     pure_entropy, pure_negativity, solve_family_param)

DEFAULT_GRID = tuple(round(0.05 * k, 10) for k in range(1, 11))
RATIO_DENOM_TOL = 1e-12
CONV_CHECK_STEP = 4
CONV_TOL = 1e-8

CSV_HEADER = ("b_over_a,n_t,match_kind,r_matched,t_g,energy_at_tg,"
              "n_0,n_r,n_g,ratio_r0,ratio_rg,cutoff,conv_delta")

MATCH_KINDS = ("energy", "entanglement", "both")
ENTANGLEMENT_MEASURES = ("entropy", "negativity")
CHECK_MODES = ("off", "first", "all")


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of one sweep run.

    ``entanglement_measure`` selects what "same initial entanglement" means
    when matching the twin-beam reference; entanglement entropy is the
    default (it reproduces the documented (entanglement, energy) pairings of
    the built-in PSSV cases; negativity matching is one flag away).
    ``check`` controls the convergence-doubling verification (recompute N_R
    at cutoff + 4): "first" covers the first grid point of each series.
    """

    state_spec: str
    match_kind: str = "both"
    b_over_a_grid: tuple = DEFAULT_GRID
    gamma: float = 1.0
    entanglement_measure: str = "entropy"
    cutoff: int | None = None
    cutoff_floor: int = CUTOFF_FLOOR
    cutoff_cap: int | None = 24
    check: str = "first"
    out: str | None = None

    def __post_init__(self):
        if self.match_kind not in MATCH_KINDS:
            raise ValueError(f"match_kind must be one of {MATCH_KINDS}, got {self.match_kind!r}")
        if self.entanglement_measure not in ENTANGLEMENT_MEASURES:
            raise ValueError(f"entanglement_measure must be one of {ENTANGLEMENT_MEASURES}")
        if self.check not in CHECK_MODES:
            raise ValueError(f"check must be one of {CHECK_MODES}, got {self.check!r}")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        grid = tuple(float(x) for x in self.b_over_a_grid)
        if not grid:
            raise ValueError("B/A grid must not be empty")
        if any(not 0 < x < 1 for x in grid):
            raise ValueError("all B/A values must lie in (0, 1)")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("B/A grid must be strictly increasing")
        object.__setattr__(self, "b_over_a_grid", grid)

    def kinds(self) -> tuple:
        if self.match_kind == "both":
            return ("energy", "entanglement")
        return (self.match_kind,)


@dataclass(frozen=True)
class SweepRecord:
    b_over_a: float
    n_t: float
    match_kind: str
    r_matched: float
    t_g: float
    energy_at_tg: float
    n_0: float
    n_r: float
    n_g: float
    ratio_r0: float | None   # None marks an undefined ratio (denominator ~ 0)
    ratio_rg: float | None
    cutoff: int
    conv_delta: float | None  # None when the doubling check was not run


@dataclass(frozen=True)
class SweepPointError:
    b_over_a: float
    n_t: float
    match_kind: str
    reason: str


def matched_twb_lambda(coeffs: PnesCoefficients, kind: str,
                       measure: str = "entropy") -> float:
    """Twin-beam lambda matched to the state's initial energy or
    entanglement.  Energy and negativity invert in closed form; entropy is
    solved by bisection."""
    if kind == "energy":
        e0 = pnes_energy(coeffs)
        return math.sqrt(e0 / (e0 + 2.0))
    if kind != "entanglement":
        raise ValueError(f"unknown match kind {kind!r}")
    if measure == "negativity":
        n0 = pure_negativity(coeffs)
        return n0 / (1.0 + n0)
    return solve_family_param("twb", MatchTarget("entropy", pure_entropy(coeffs)))


def _sweep_cutoff(coeffs: PnesCoefficients, params: ChannelParams,
                  config: SweepConfig) -> int:
    if config.cutoff is not None:
        return config.cutoff
    dim = policy_cutoff(coeffs, params, floor=config.cutoff_floor)
    if config.cutoff_cap is not None:
        dim = min(dim, max(config.cutoff_cap, support_dim(coeffs)))
    return dim


def _point(coeffs: PnesCoefficients, config: SweepConfig, b_over_a: float,
           kind: str, do_check: bool):
    params = ChannelParams.from_b_over_a(b_over_a, gamma=config.gamma)
    try:
        lam = matched_twb_lambda(coeffs, kind, config.entanglement_measure)
        r = math.atanh(lam)
        t_g = t_g_closed(r, params)
        dim = _sweep_cutoff(coeffs, params, config)
        state = evolve_pnes(coeffs, params, t_g, cutoff=dim)
        leak = state.tail_bound - coeffs.truncation_loss
        if leak > TRACE_LEAK_TOL:
            raise PnesimError(f"trace leak {leak:.3e} above {TRACE_LEAK_TOL:.1e} at cutoff {dim}")
        n_0 = pure_negativity(coeffs)
        n_r = negativity(state).value
        e_tg = energy_closed_form(pnes_energy(coeffs), params, t_g)
        n_g = reference_ng(e_tg)
        conv_delta = None
        if do_check:
            bumped = evolve_pnes(coeffs, params, t_g, cutoff=dim + CONV_CHECK_STEP)
            conv_delta = abs(negativity(bumped).value - n_r)
        return SweepRecord(
            b_over_a=b_over_a, n_t=params.n_t, match_kind=kind, r_matched=r,
            t_g=t_g, energy_at_tg=e_tg, n_0=n_0, n_r=n_r, n_g=n_g,
            ratio_r0=n_r / n_0 if n_0 > RATIO_DENOM_TOL else None,
            ratio_rg=n_r / n_g if n_g > RATIO_DENOM_TOL else None,
            cutoff=dim, conv_delta=conv_delta,
        )
    except (PnesimError, ValueError) as exc:
        return SweepPointError(b_over_a=b_over_a, n_t=params.n_t, match_kind=kind,
                               reason=str(exc))


def run_sweep(config: SweepConfig) -> list:
    """All sweep records (grid-major, energy before entanglement); failed
    points yield SweepPointError entries and the run continues."""
    coeffs = parse_state_spec(config.state_spec)
    out = []
    for index, b_over_a in enumerate(config.b_over_a_grid):
        for kind in config.kinds():
            do_check = config.check == "all" or (config.check == "first" and index == 0)
            out.append(_point(coeffs, config, b_over_a, kind, do_check))
    return out


# -- CSV rendering -----------------------------------------------------------

def format_value(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def record_row(record) -> str:
    if isinstance(record, SweepPointError):
        reason = record.reason.replace(",", ";")
        return (f"{record.b_over_a:.12g},{record.n_t:.12g},{record.match_kind},"
                f"error={reason}")
    fields = [record.b_over_a, record.n_t, record.match_kind, record.r_matched,
              record.t_g, record.energy_at_tg, record.n_0, record.n_r, record.n_g,
              record.ratio_r0, record.ratio_rg, record.cutoff,
              "" if record.conv_delta is None else record.conv_delta]
    return ",".join(format_value(f) for f in fields)


def render_csv(records) -> str:
    return "\n".join([CSV_HEADER] + [record_row(r) for r in records]) + "\n"


def write_csv(records, path) -> None:
    with open(path, "w") as handle:
        handle.write(render_csv(records))


# -- figure pipeline ---------------------------------------------------------
#
# Built-in cases: two PSSV states labelled by their per-mode initial energy
# (total energy is twice that; the corresponding initial entanglement
# entropies are ~0.1 and ~1.0 ebits) and three |00>/|11> superpositions
# labelled by |c1|^2.  Each runs with both matchings over the B/A grid.

@dataclass(frozen=True)
class Fig1Case:
    key: str
    state_spec: str
    panel: str


FIG1_CASES = (
    Fig1Case("pssv_E0.013", "pssv:energy=0.026", "pssv"),
    Fig1Case("pssv_E0.3", "pssv:energy=0.6", "pssv"),
    Fig1Case("psi01_c0.5", "psi01:c1sq=0.5", "psi01"),
    Fig1Case("psi01_c0.25", "psi01:c1sq=0.25", "psi01"),
    Fig1Case("psi01_c0.05", "psi01:c1sq=0.05", "psi01"),
)

FIG1_TABLES = ("pssv_ratio_rg", "pssv_ratio_r0", "psi01_ratio_rg", "psi01_ratio_r0")


@dataclass(frozen=True)
class Fig1Result:
    """Four ratio tables (one per figure panel), the per-case sweep records,
    and the paths written (when an output directory was given)."""

    tables: dict
    records: dict
    csv_paths: tuple = ()
    svg_path: str | None = None


def _ratio_cell(entry, which: str):
    if isinstance(entry, SweepPointError):
        return "error=" + entry.reason.replace(",", ";")
    return getattr(entry, which)


def run_fig1(out_dir=None, config: SweepConfig | None = None, svg: bool = True) -> Fig1Result:
    """Run the five built-in cases with both matchings and assemble the four
    panel tables (ratio vs B/A, one column per case and matching).

    ``config`` overrides grid/cutoff/check settings; its state_spec and
    match_kind are ignored (the cases fix them).
    """
    base = config or SweepConfig(state_spec="psi01:c1sq=0.5")
    records = {}
    for case in FIG1_CASES:
        case_config = replace(base, state_spec=case.state_spec, match_kind="both")
        records[case.key] = run_sweep(case_config)

    grid = base.b_over_a_grid
    kinds = ("energy", "entanglement")
    tables = {}
    for panel in ("pssv", "psi01"):
        cases = [c for c in FIG1_CASES if c.panel == panel]
        columns = [f"{c.key}_{kind}" for c in cases for kind in kinds]
        for which, name in (("ratio_rg", f"{panel}_ratio_rg"), ("ratio_r0", f"{panel}_ratio_r0")):
            rows = []
            for index, b_over_a in enumerate(grid):
                row = [b_over_a]
                for c in cases:
                    for offset, _ in enumerate(kinds):
                        row.append(_ratio_cell(records[c.key][2 * index + offset], which))
                rows.append(row)
            tables[name] = {"columns": ["b_over_a"] + columns, "rows": rows}

    csv_paths = []
    svg_path = None
    if out_dir is not None:
        import os

        os.makedirs(out_dir, exist_ok=True)
        for name in FIG1_TABLES:
            path = os.path.join(out_dir, f"fig1_{name}.csv")
            table = tables[name]
            lines = [",".join(table["columns"])]
            lines += [",".join(format_value(cell) for cell in row) for row in table["rows"]]
            with open(path, "w") as handle:
                handle.write("\n".join(lines) + "\n")
            csv_paths.append(path)
        if svg:
            from .plotting import render_fig1

            svg_path = os.path.join(out_dir, "fig1.svg")
            render_fig1(tables, svg_path)
    return Fig1Result(tables=tables, records=records,
                      csv_paths=tuple(csv_paths), svg_path=svg_path)


def thermal_occupation(frequency: float, temperature: float) -> float:
    """Bose-Einstein mean occupation 1/(exp(h nu / k_B T) - 1)."""
    if frequency <= 0:
        raise ValueError(f"frequency must be > 0, got {frequency}")
    if temperature <= 0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    return 1.0 / math.expm1(Planck * frequency / (Boltzmann * temperature))
