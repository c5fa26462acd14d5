"""Reproductions of the figure-scale studies as one-shot presets.

Each preset emits multi-series CSV data plus a rendered figure.  Grids are
chosen so that the horizon criterion of the measures module holds (or is
reached by its one automatic extension); the physical parameter sets are
fixed, the axis ranges are choices of this package.
"""

import numpy as np

from chancap import config as cfg
from chancap import measures
from chancap.capacities import ChannelFamily, capacity_curve
from chancap.channels import AMPLITUDE_DAMPING, DEPHASING
from chancap.dynamics import (
    AmplitudeDynamics,
    BandGapModel,
    DephasingDynamics,
    LorentzianSpectrum,
    OhmicSpectrum,
)
from chancap.errors import ConfigError
from chancap.grids import TimeGrid
from chancap.reports import render_line_figure, write_measures_csv, write_series_csv

#: coupling ratio R = gamma_M / lambda shared by the Lorentzian studies
_LORENTZ_R = 1.0 / 0.06


def _figure_path(out_dir, name, svg):
    return out_dir / f"{name}.{'svg' if svg else 'png'}"


def _fig1(out_dir, svg, grid_scale):
    """Dephasing, super-Ohmic s=3: capacity dip and residual plateau."""
    spec = OhmicSpectrum(s=3.0, gamma_M=0.1, omega_c=1.0)
    family = ChannelFamily(DEPHASING, DephasingDynamics.ohmic(spec))
    grid = TimeGrid(20.0, 2001).scaled(grid_scale)
    times = grid.times()
    q = capacity_curve(family, grid, "Q").values
    rate = family.dynamics.rate_curve(times)
    files = [
        write_series_csv(out_dir / "fig1_Q.csv", "t", times, [("Q", q)]),
        write_series_csv(out_dir / "fig1_gamma_rate.csv", "t", times, [("gamma_rate", rate)]),
    ]
    witness = measures.divisibility_witness(family.dynamics, grid)
    files.append(
        render_line_figure(
            _figure_path(out_dir, "fig1", svg),
            times,
            [("Q", q)],
            "omega_c t",
            "Q",
            title="dephasing, Ohmic s=3, gamma_M=0.1 (shaded: gamma<0)",
            shaded_spans=witness.negative_intervals,
        )
    )
    return files


def _fig2(out_dir, svg, grid_scale):
    """Amplitude damping, Lorentzian reservoir: Q revivals vs detuning."""
    deltas = (3.0, 5.0, 6.0, 8.0)
    grid = TimeGrid(2.0, 4001).scaled(grid_scale)
    times = grid.times()
    series = []
    nq_rows = []
    nq_values = []
    for delta in deltas:
        spec = LorentzianSpectrum(gamma_M=_LORENTZ_R, lam=1.0, delta=delta)
        family = ChannelFamily(AMPLITUDE_DAMPING, AmplitudeDynamics.lorentzian(spec))
        series.append((f"Q[delta={delta:g}]", capacity_curve(family, grid, "Q").values))
        report = measures.measure_NQ(family, grid)
        nq_values.append(report.value)
        nq_rows.append(
            {
                "quantity": "N_Q",
                "series": f"delta={delta:g}",
                "value": report.value,
                "converged": report.converged,
                "intervals": report.intervals,
            }
        )
    files = [
        write_series_csv(out_dir / "fig2_Q.csv", "t", times, series),
        write_series_csv(
            out_dir / "fig2_NQ_inset.csv", "delta", np.asarray(deltas), [("N_Q", nq_values)]
        ),
        write_measures_csv(out_dir / "fig2_measures.csv", nq_rows),
        render_line_figure(
            _figure_path(out_dir, "fig2", svg),
            times,
            series,
            "lambda t",
            "Q",
            title="amplitude damping, Lorentzian, R=1/0.06",
        ),
    ]
    return files


def _fig3(out_dir, svg, grid_scale):
    """Amplitude damping in a photonic band gap: trapped capacity plateaus."""
    detunings = (-4.0, -1.0, 0.0)
    grid = TimeGrid(30.0, 3001).scaled(grid_scale)
    times = grid.times()
    series = []
    for delta_e in detunings:
        family = ChannelFamily(
            AMPLITUDE_DAMPING, AmplitudeDynamics.bandgap(BandGapModel(delta_e=delta_e))
        )
        series.append((f"Q[delta_e={delta_e:g}]", capacity_curve(family, grid, "Q").values))
    return [
        write_series_csv(out_dir / "fig3_Q.csv", "t", times, series),
        render_line_figure(
            _figure_path(out_dir, "fig3", svg),
            times,
            series,
            "beta t",
            "Q",
            title="amplitude damping, photonic band edge",
        ),
    ]


def _suppfig1(out_dir, svg, grid_scale):
    """Q vs C_ea on resonance: only C_ea revives at R=10, both at R=100."""
    grid = TimeGrid(2.0, 4001).scaled(grid_scale)
    times = grid.times()
    q_series, c_series, rows = [], [], []
    for R in (10.0, 100.0):
        spec = LorentzianSpectrum(gamma_M=R, lam=1.0, delta=0.0)
        family = ChannelFamily(AMPLITUDE_DAMPING, AmplitudeDynamics.lorentzian(spec))
        q_series.append((f"Q[R={R:g}]", capacity_curve(family, grid, "Q").values))
        c_series.append((f"C_ea[R={R:g}]", capacity_curve(family, grid, "C_ea").values))
        for name, fn in (("N_Q", measures.measure_NQ), ("N_C", measures.measure_NC)):
            report = fn(family, grid)
            rows.append(
                {
                    "quantity": name,
                    "series": f"R={R:g}",
                    "value": report.value,
                    "converged": report.converged,
                    "intervals": report.intervals,
                }
            )
    return [
        write_series_csv(out_dir / "suppfig1_Q.csv", "t", times, q_series),
        write_series_csv(out_dir / "suppfig1_C_ea.csv", "t", times, c_series),
        write_measures_csv(out_dir / "suppfig1_measures.csv", rows),
        render_line_figure(
            _figure_path(out_dir, "suppfig1", svg),
            times,
            q_series + c_series,
            "lambda t",
            "capacity [bits]",
            title="amplitude damping, Lorentzian, delta=0",
        ),
    ]


def _suppfig2(out_dir, svg, grid_scale):
    """Measure comparison vs coupling: N_L lower bound, N_C and N_Q."""
    r_values = (1.0, 2.0, 5.0, 10.0, 20.0, 43.0, 70.0, 100.0)
    grid = TimeGrid(2.0, 4001).scaled(grid_scale)
    columns = {"N_L": [], "N_C": [], "N_Q": []}
    for R in r_values:
        spec = LorentzianSpectrum(gamma_M=R, lam=1.0, delta=0.0)
        family = ChannelFamily(AMPLITUDE_DAMPING, AmplitudeDynamics.lorentzian(spec))
        columns["N_L"].append(measures.lsf_lower_bound(family, grid).value)
        columns["N_C"].append(measures.measure_NC(family, grid).value)
        columns["N_Q"].append(measures.measure_NQ(family, grid).value)
    series = [(name, np.asarray(vals)) for name, vals in columns.items()]
    return [
        write_series_csv(out_dir / "suppfig2_measures.csv", "R", np.asarray(r_values), series),
        render_line_figure(
            _figure_path(out_dir, "suppfig2", svg),
            np.asarray(r_values),
            series,
            "R",
            "measure [bits]",
            title="non-Markovianity measures, Lorentzian, delta=0",
        ),
    ]


PRESETS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "suppfig1": _suppfig1,
    "suppfig2": _suppfig2,
}


def run_preset(name: str, out_dir, *, svg=True, grid_scale=1.0):
    """Emit a preset's CSV series and figure; returns the written paths."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (valid: {sorted(PRESETS)})")
    out_dir = cfg.resolve_output_dir(None, None) if out_dir is None else out_dir
    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return PRESETS[name](out_dir, svg, grid_scale)
