"""CSV and figure emission.

CSV files are byte-stable: 17 significant digits, '.' decimal separator,
'\\n' line endings, header row "t" (or the sweep axis) followed by the
series identifiers.  Figures are matplotlib renderings of the same series,
written next to the CSVs (SVG by default).
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def format_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if np.isnan(x):
        return "nan"
    return f"{x:.17g}"


def write_series_csv(path, axis_name: str, axis, series) -> Path:
    """``series`` is a list of (name, values) with values matching ``axis``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [np.asarray(axis)] + [np.asarray(v) for _, v in series]
    names = [axis_name] + [name for name, _ in series]
    for name, col in zip(names[1:], cols[1:]):
        if col.shape != cols[0].shape:
            raise ValueError(f"series {name!r} length {col.size} != axis length {cols[0].size}")
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(format_number(v) for v in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_measures_csv(path, rows) -> Path:
    """Summary table: one row per (quantity, series) measure result."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = "quantity,series,value,converged,intervals"
    lines = [header]
    for row in rows:
        intervals = ";".join(
            f"{format_number(a)}:{format_number(b)}" for a, b in row["intervals"]
        )
        lines.append(
            ",".join(
                [
                    row["quantity"],
                    row["series"],
                    format_number(row["value"]),
                    format_number(bool(row["converged"])),
                    intervals,
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def render_line_figure(path, x, series, xlabel, ylabel, title=None, shaded_spans=()) -> Path:
    """Render the series as plain lines; ``shaded_spans`` marks x-windows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, values in series:
        ax.plot(np.asarray(x), np.asarray(values), label=name, linewidth=1.4)
    for lo, hi in shaded_spans:
        ax.axvspan(lo, hi, color="tab:blue", alpha=0.12, linewidth=0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
