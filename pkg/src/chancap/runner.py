"""Execute a validated run configuration and emit CSV / figure files."""

from pathlib import Path

from chancap import config as cfg
from chancap import measures
from chancap.capacities import capacity_curve, g2_curve
from chancap.dynamics import DephasingDynamics, rates_from_G
from chancap.reports import render_line_figure, write_measures_csv, write_series_csv


def _series_environments(config: cfg.RunConfig):
    if config.sweep is None:
        return [("", config.environment)]
    out = []
    for value in config.sweep.values:
        env = dict(config.environment)
        env[config.sweep.parameter] = value
        out.append((f"{config.sweep.parameter}={value:g}", env))
    return out


def _column_name(quantity: str, label: str) -> str:
    return f"{quantity}[{label}]" if label else quantity


def _curve_values(quantity, family, grid):
    if quantity in ("Q", "C_ea"):
        return capacity_curve(family, grid, quantity).values
    if quantity == "G2":
        return g2_curve(family, grid)
    if quantity == "gamma_rate":
        if isinstance(family.dynamics, DephasingDynamics):
            return family.dynamics.rate_curve(grid.times())
        samples = rates_from_G(grid.times(), family.dynamics.sample(grid))
        return samples.decay_rate
    raise ValueError(f"unknown curve quantity {quantity!r}")


def run(config: cfg.RunConfig, out_dir, *, figure=False, grid_scale=1.0):
    """Compute every requested quantity and write one CSV per curve quantity,
    a measures summary, and (optionally) one figure per curve quantity.

    Returns the list of written paths.
    """
    out_dir = Path(out_dir)
    grid = config.grid.scaled(grid_scale)
    base = config.output.basename
    make_figures = figure or config.output.figure
    xlabel = cfg.time_axis_label(config.environment)

    series_envs = _series_environments(config)
    families = [(label, cfg.build_family(config.channel, env)) for label, env in series_envs]

    written = []
    curve_quantities = [q for q in config.quantities if q in cfg.CURVE_QUANTITIES]
    measure_quantities = [q for q in config.quantities if q in cfg.MEASURE_QUANTITIES]

    times = grid.times()
    for quantity in curve_quantities:
        series = [
            (_column_name(quantity, label), _curve_values(quantity, family, grid))
            for label, family in families
        ]
        written.append(write_series_csv(out_dir / f"{base}_{quantity}.csv", "t", times, series))
        if make_figures:
            written.append(
                render_line_figure(
                    out_dir / f"{base}_{quantity}.svg", times, series, xlabel, quantity
                )
            )

    if measure_quantities:
        rows = []
        for quantity in measure_quantities:
            for label, family in families:
                if quantity == "N_Q":
                    report = measures.measure_NQ(family, grid)
                elif quantity == "N_C":
                    report = measures.measure_NC(family, grid)
                else:
                    report = measures.lsf_lower_bound(family, grid, config.theta_samples)
                rows.append(
                    {
                        "quantity": quantity,
                        "series": label,
                        "value": report.value,
                        "converged": report.converged,
                        "intervals": report.intervals,
                    }
                )
        written.append(write_measures_csv(out_dir / f"{base}_measures.csv", rows))
    return written
