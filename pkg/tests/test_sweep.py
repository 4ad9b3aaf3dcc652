"""Sweep driver: records, CSV schema, matching, built-in figure pipeline."""

import math

import pytest
from scipy.constants import Boltzmann, Planck

from pnesim.states import parse_state_spec, pnes_energy, pure_entropy, pure_negativity, twb_coeffs
from pnesim.sweep import (CSV_HEADER, DEFAULT_GRID, FIG1_CASES, SweepConfig,
                          SweepPointError, SweepRecord, matched_twb_lambda, record_row,
                          render_csv, run_fig1, run_sweep, thermal_occupation, write_csv)

SHORT_GRID = (0.1, 0.3, 0.5)


def test_default_grid_is_ten_points():
    assert len(DEFAULT_GRID) == 10
    assert DEFAULT_GRID[0] == 0.05
    assert DEFAULT_GRID[-1] == 0.5


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.5, 0.3))
    with pytest.raises(ValueError):
        SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.0, 0.5))
    with pytest.raises(ValueError):
        SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.5, 1.0))
    with pytest.raises(ValueError):
        SweepConfig(state_spec="psi01:c1sq=0.5", match_kind="bogus")
    with pytest.raises(ValueError):
        SweepConfig(state_spec="psi01:c1sq=0.5", check="sometimes")
    with pytest.raises(ValueError):
        SweepConfig(state_spec="psi01:c1sq=0.5", gamma=0.0)


def test_matched_twb_lambda_closed_forms():
    coeffs = parse_state_spec("psi01:c1sq=0.5")
    e0 = pnes_energy(coeffs)
    assert matched_twb_lambda(coeffs, "energy") == pytest.approx(math.sqrt(e0 / (e0 + 2)))
    n0 = pure_negativity(coeffs)
    assert matched_twb_lambda(coeffs, "entanglement", "negativity") == pytest.approx(n0 / (1 + n0))
    lam = matched_twb_lambda(coeffs, "entanglement", "entropy")
    matched = twb_coeffs(lam)
    assert pure_entropy(matched) == pytest.approx(pure_entropy(coeffs), abs=1e-8)


def test_run_sweep_record_layout():
    config = SweepConfig(state_spec="psi01:c1sq=0.25", match_kind="both",
                         b_over_a_grid=SHORT_GRID, check="first")
    records = run_sweep(config)
    assert len(records) == 2 * len(SHORT_GRID)
    # grid-major ordering, energy before entanglement at each point
    assert [(r.b_over_a, r.match_kind) for r in records] == [
        (b, kind) for b in SHORT_GRID for kind in ("energy", "entanglement")]
    for r in records:
        assert isinstance(r, SweepRecord)
        assert r.n_t == pytest.approx(r.b_over_a / (1 - r.b_over_a))
        assert r.n_0 == pytest.approx(pure_negativity(parse_state_spec("psi01:c1sq=0.25")))
        assert r.n_r <= r.n_0 + 1e-10
        assert r.n_g > 0
    # check="first" touches exactly the first grid point of each series
    assert all(r.conv_delta is not None for r in records[:2])
    assert all(r.conv_delta is None for r in records[2:])


def test_twb_control_state_has_zero_residual():
    # a twin beam matched to itself separates exactly at its own t_G
    config = SweepConfig(state_spec="twb:lambda=0.5", match_kind="both",
                         b_over_a_grid=SHORT_GRID, check="off")
    for record in run_sweep(config):
        assert record.n_r == 0.0
        assert record.ratio_r0 == 0.0


def test_csv_header_and_determinism():
    config = SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=SHORT_GRID)
    text_a = render_csv(run_sweep(config))
    text_b = render_csv(run_sweep(config))
    assert text_a == text_b
    lines = text_a.splitlines()
    assert lines[0] == CSV_HEADER
    assert CSV_HEADER == ("b_over_a,n_t,match_kind,r_matched,t_g,energy_at_tg,"
                          "n_0,n_r,n_g,ratio_r0,ratio_rg,cutoff,conv_delta")
    assert len(lines) == 1 + 6
    # every data row has the full 13 columns
    assert all(row.count(",") == 12 for row in lines[1:])


def test_undefined_ratio_marker():
    # a separable input has zero initial negativity, energy, and entropy:
    # every denominator collapses and the ratios must be marked, not divided
    config = SweepConfig(state_spec="psi01:c1sq=0", b_over_a_grid=(0.25,),
                         match_kind="both", check="off")
    records = run_sweep(config)
    assert all(isinstance(r, SweepRecord) for r in records)
    for record in records:
        assert record.ratio_r0 is None
        assert record.ratio_rg is None
        row = record_row(record)
        assert row.count("undefined") == 2


def test_error_rows_keep_schema_and_reason():
    # an explicit cutoff far below the state support fails every point
    config = SweepConfig(state_spec="twb:lambda=0.5", b_over_a_grid=(0.2, 0.4),
                         match_kind="energy", cutoff=4, check="off")
    records = run_sweep(config)
    assert all(isinstance(r, SweepPointError) for r in records)
    rows = render_csv(records).splitlines()[1:]
    for row, record in zip(rows, records):
        assert row.startswith(f"{record.b_over_a:.12g},{record.n_t:.12g},energy,error=")
        assert "," not in row.split("error=", 1)[1]  # reasons embed no commas


def test_conv_delta_renders_empty_when_absent():
    config = SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.2, 0.4),
                         match_kind="energy", check="off")
    rows = render_csv(run_sweep(config)).splitlines()[1:]
    assert all(row.endswith(",") for row in rows)


def test_write_csv_roundtrip(tmp_path):
    config = SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.25,),
                         match_kind="energy", check="off")
    records = run_sweep(config)
    path = tmp_path / "sweep.csv"
    write_csv(records, path)
    assert path.read_text() == render_csv(records)


def test_run_fig1_table_structure():
    config = SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.1, 0.5),
                         check="off")
    result = run_fig1(out_dir=None, config=config, svg=False)
    assert set(result.tables) == {"pssv_ratio_rg", "pssv_ratio_r0",
                                  "psi01_ratio_rg", "psi01_ratio_r0"}
    assert set(result.records) == {case.key for case in FIG1_CASES}
    pssv = result.tables["pssv_ratio_rg"]
    assert pssv["columns"] == ["b_over_a", "pssv_E0.013_energy", "pssv_E0.013_entanglement",
                               "pssv_E0.3_energy", "pssv_E0.3_entanglement"]
    assert len(pssv["rows"]) == 2
    psi01 = result.tables["psi01_ratio_r0"]
    assert len(psi01["columns"]) == 1 + 6  # three cases, two matchings
    assert pssv["rows"][0][0] == 0.1


def test_run_fig1_writes_artifacts(tmp_path):
    config = SweepConfig(state_spec="psi01:c1sq=0.5", b_over_a_grid=(0.1, 0.5),
                         check="off")
    result = run_fig1(out_dir=str(tmp_path), config=config, svg=True)
    assert len(result.csv_paths) == 4
    for path in result.csv_paths:
        assert (tmp_path / path.split("/")[-1]).exists()
    assert result.svg_path is not None
    svg = (tmp_path / "fig1.svg").read_text()
    assert svg.lstrip().startswith("<?xml")


def test_fig1_cases_match_their_specs():
    specs = {case.key: case.state_spec for case in FIG1_CASES}
    assert pnes_energy(parse_state_spec(specs["pssv_E0.013"])) == pytest.approx(0.026, abs=1e-9)
    assert pnes_energy(parse_state_spec(specs["pssv_E0.3"])) == pytest.approx(0.6, abs=1e-9)
    assert parse_state_spec(specs["psi01_c0.05"]).param == 0.05


def test_thermal_occupation_bose_einstein():
    nu = 1e15
    t_match = Planck * nu / Boltzmann  # about 4.80e4 K
    assert t_match == pytest.approx(4.8e4, rel=0.01)
    assert thermal_occupation(nu, t_match) == pytest.approx(1 / (math.e - 1), rel=1e-12)
    assert thermal_occupation(nu, t_match) == pytest.approx(0.58198, abs=5e-6)
    # inverted: N_T = 1 at T = h nu / (k_B ln 2)
    t_one = Planck * nu / (Boltzmann * math.log(2))
    assert thermal_occupation(nu, t_one) == pytest.approx(1.0, rel=1e-12)
    # low temperature freezes the bath out
    assert thermal_occupation(nu, 300.0) < 1e-60
    with pytest.raises(ValueError):
        thermal_occupation(0.0, 300.0)
    with pytest.raises(ValueError):
        thermal_occupation(nu, -1.0)
