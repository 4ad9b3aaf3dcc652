"""Figure rendering for the sweep pipeline (headless; SVG output)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# (color, marker) per built-in case; filled markers and solid lines for
# energy matching, open markers and dashed lines for entanglement matching.
CASE_STYLES = {
    "pssv_E0.013": ("black", "o", "PSSV, E0 = 0.013"),
    "pssv_E0.3": ("tab:red", "s", "PSSV, E0 = 0.3"),
    "psi01_c0.5": ("black", "o", "|c1|^2 = 0.5"),
    "psi01_c0.25": ("tab:red", "s", "|c1|^2 = 0.25"),
    "psi01_c0.05": ("tab:blue", "^", "|c1|^2 = 0.05"),
}

PANEL_TITLES = {"pssv": "photon-subtracted squeezed vacuum", "psi01": "|00>/|11> superposition"}
RATIO_LABELS = {"ratio_rg": "N_R / N_G", "ratio_r0": "N_R / N_0"}


def _series(table, column):
    """(x, y) pairs for one column, skipping undefined/error cells."""
    idx = table["columns"].index(column)
    xs, ys = [], []
    for row in table["rows"]:
        cell = row[idx]
        if isinstance(cell, (int, float)) and cell is not None:
            xs.append(row[0])
            ys.append(cell)
    return xs, ys


def render_fig1(tables: dict, path: str) -> None:
    """Render the four ratio tables as a 2x2 grid of panels.

    Rows are the two ratios (to the Gaussian reference, to the initial
    negativity); columns are the two state families.  Each case appears
    twice per panel: filled/solid for energy matching, open/dashed for
    entanglement matching.
    """
    fig, axes = plt.subplots(2, 2, figsize=(9.6, 7.2), sharex=True)
    for row, which in enumerate(("ratio_rg", "ratio_r0")):
        for col, panel in enumerate(("pssv", "psi01")):
            ax = axes[row][col]
            table = tables[f"{panel}_{which}"]
            for column in table["columns"][1:]:
                key, kind = column.rsplit("_", 1)
                color, marker, label = CASE_STYLES[key]
                xs, ys = _series(table, column)
                if kind == "energy":
                    ax.plot(xs, ys, color=color, marker=marker, linestyle="-",
                            label=f"{label} (energy)")
                else:
                    ax.plot(xs, ys, color=color, marker=marker, linestyle="--",
                            markerfacecolor="none", label=f"{label} (entanglement)")
            ax.set_ylabel(RATIO_LABELS[which])
            if row == 0:
                ax.set_title(PANEL_TITLES[panel])
            if row == 1:
                ax.set_xlabel("B/A")
            ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
