"""Figure recipes: CSV layout contracts and deterministic rendering.

Each recipe names the CSV files an ``eitfluct`` run leaves in the data
directory (multi-run figures use ``panel_*`` subdirectories) and draws a
fixed layout from fixed columns.  Rendering is pure: the same CSVs yield
byte-identical images (Agg backend, fixed geometry, stripped metadata).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["PlotkitError", "FigureRecipe", "RECIPES", "render", "load_table"]

_FIGSIZE = (8.0, 5.0)
_DPI = 110


class PlotkitError(Exception):
    """Raised for missing files, missing columns, or empty data."""


@dataclass(frozen=True)
class FigureRecipe:
    """Inputs and layout of one figure."""

    figure_id: str
    inputs: tuple          # relative paths or glob patterns inside --data
    panels: tuple          # (rows, cols)
    description: str


RECIPES = {
    "fig2": FigureRecipe("fig2", ("susceptibility.csv",), (1, 1),
                         "probe absorption vs probe detuning, two pump detunings"),
    "fig3": FigureRecipe("fig3", ("panel_a/resonance_spectra.csv",
                                  "panel_b/resonance_spectra.csv"), (2, 1),
                         "noise interchange without and with absorption"),
    "fig4": FigureRecipe("fig4", ("diagnostics_delta_*.csv",), (2, 1),
                         "absorption coefficients and their sum vs frequency"),
    "fig5": FigureRecipe("fig5", ("detuned_spectra_delta_*.csv",), (1, 1),
                         "squeezed-vacuum probe quadrature vs distance"),
    "fig6": FigureRecipe("fig6", ("detuned_spectra_delta_*.csv",), (1, 1),
                         "probe/pump interchange at detuned two-photon resonance"),
    "fig7": FigureRecipe("fig7", ("panel_a/detuned_spectra_delta_*.csv",
                                  "panel_b/detuned_spectra_delta_*.csv",
                                  "panel_c/detuned_spectra_delta_*.csv",
                                  "panel_d/detuned_spectra_delta_*.csv"), (2, 2),
                         "fast-oscillation envelopes for increasing decay"),
    "fig8": FigureRecipe("fig8", ("detuned_spectra_delta_*.csv",), (1, 1),
                         "extremal probe quadratures vs distance"),
    "fig9": FigureRecipe("fig9", ("doppler.csv",), (2, 2),
                         "Doppler-averaged probe quadrature, four widths"),
    "fig10": FigureRecipe("fig10", ("doppler.csv",), (2, 2),
                          "Doppler-averaged pump and probe, four widths"),
}


def load_table(path) -> dict[str, np.ndarray]:
    """CSV as a column dict; empty data is an error, not a blank plot."""
    path = Path(path)
    if not path.exists():
        raise PlotkitError(f"missing input file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotkitError(f"{path}: empty CSV") from None
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise PlotkitError(f"{path}: no data rows")
    data = np.asarray(rows)
    return {name: data[:, k] for k, name in enumerate(header)}


def _column(table, name, path):
    try:
        return table[name]
    except KeyError:
        raise PlotkitError(f"{path}: missing column {name!r}") from None


def _columns_like(table, prefix, path):
    names = sorted(name for name in table if name.startswith(prefix))
    if not names:
        raise PlotkitError(f"{path}: no columns starting with {prefix!r}")
    return names


def _resolve(data_dir: Path, pattern: str) -> list[Path]:
    if "*" in pattern:
        found = sorted(data_dir.glob(pattern))
        if not found:
            raise PlotkitError(f"no files matching {pattern!r} in {data_dir}")
        return found
    return [data_dir / pattern]


def _theta_columns(table, field, path):
    return _columns_like(table, f"S{field}_theta_", path)


def _envelope(z, values, windows=160):
    """Per-window min/max band, standing in for unresolvably fast traces."""
    n = len(z)
    size = max(n // windows, 1)
    trim = (n // size) * size
    zz = z[:trim].reshape(-1, size)
    vv = values[:trim].reshape(-1, size)
    return zz.mean(axis=1), vv.min(axis=1), vv.max(axis=1)


def _draw_fig2(axes, tables):
    ax = axes[0]
    table, path = tables[0]
    d2 = _column(table, "delta2_over_gamma", path)
    styles = ("-", "--")
    ims = _columns_like(table, "im_chi_delta1_", path)
    for name, style in zip(ims, styles):
        ax.plot(d2, table[name], style, color="k",
                label=name.replace("im_chi_delta1_", "pump detuning "))
    ax.set_xlabel("probe detuning (gamma)")
    ax.set_ylabel("Im chi (arb. units)")
    ax.legend(frameon=False)


def _draw_spectra_panel(ax, table, path, fields=(2, 1)):
    z = _column(table, "z_C_over_gamma", path)
    for field, style in zip(fields, ("-", "--")):
        name = _theta_columns(table, field, path)[0]
        ax.plot(z, table[name], style, color="k",
                label=f"field {field}")
    ax.set_xlabel("z C / gamma")
    ax.set_ylabel("quadrature noise")


def _draw_fig3(axes, tables):
    for ax, (table, path) in zip(axes, tables):
        _draw_spectra_panel(ax, table, path)
    axes[0].legend(frameon=False)


def _draw_fig4(axes, tables):
    table, path = tables[0]
    w = _column(table, "omega_over_gamma", path)
    axes[0].plot(w, -_column(table, "qp_i", path), "-", color="k",
                 label="|Im Q+|")
    axes[0].plot(w, -_column(table, "qm_i", path), ":", color="k",
                 label="|Im Q-|")
    axes[0].set_ylabel("absorption (C/gamma)")
    axes[0].legend(frameon=False)
    for (table, path), style in zip(tables, ("-", ":")):
        w = _column(table, "omega_over_gamma", path)
        axes[1].plot(w, _column(table, "abs_qi_sum", path), style, color="k")
    axes[1].set_xlabel("frequency from carrier (gamma)")
    axes[1].set_ylabel("|Im Q+ + Im Q-|")


def _draw_fig5(axes, tables):
    ax = axes[0]
    # detuned curve solid, resonant reference dashed (sorted by |delta|)
    def delta_of(item):
        table, path = item
        return abs(table["delta_over_gamma"][0])

    for (table, path), style in zip(sorted(tables, key=delta_of, reverse=True),
                                    ("-", "--")):
        z = _column(table, "z_C_over_gamma", path)
        name = _theta_columns(table, 2, path)[0]
        ax.plot(z, table[name], style, color="k",
                label=f"delta = {table['delta_over_gamma'][0]:g} gamma")
    ax.set_xlabel("z C / gamma")
    ax.set_ylabel("probe quadrature noise")
    ax.legend(frameon=False)


def _draw_fig6(axes, tables):
    _draw_spectra_panel(axes[0], *tables[0])
    axes[0].legend(frameon=False)


def _draw_fig7(axes, tables):
    for ax, (table, path) in zip(axes, tables):
        z = _column(table, "z_C_over_gamma", path)
        name = _theta_columns(table, 2, path)[0]
        zz, lo, hi = _envelope(z, table[name])
        ax.fill_between(zz, lo, hi, color="k")
        ax.set_xlabel("z C / gamma")
        ax.set_ylabel("probe quadrature noise")


def _draw_fig8(axes, tables):
    ax = axes[0]
    table, path = tables[0]
    z = _column(table, "z_C_over_gamma", path)
    names = _theta_columns(table, 2, path)
    if len(names) < 4:
        raise PlotkitError(f"{path}: extremal-quadrature extraction needs a "
                           f"dense theta list, found {len(names)} columns")
    stack = np.stack([table[name] for name in names])
    ax.plot(z, stack.min(axis=0), "-", color="k", label="minimal quadrature")
    ax.plot(z, stack.max(axis=0), "--", color="k", label="maximal quadrature")
    ax.set_xlabel("z C / gamma")
    ax.set_ylabel("probe quadrature noise")
    ax.legend(frameon=False)


def _draw_doppler(axes, tables, fields):
    table, path = tables[0]
    z = _column(table, "z_C_over_gamma", path)
    widths = sorted({name.split("_ddelta_")[1]
                     for name in _columns_like(table, "S", path)
                     if "_ddelta_" in name},
                    key=lambda tag: float(tag.replace("p", ".").replace("m", "-")))
    if len(widths) != len(axes):
        raise PlotkitError(f"{path}: expected {len(axes)} Doppler widths, "
                           f"found {len(widths)}")
    for ax, tag in zip(axes, widths):
        for field, style in zip(fields, ("-", "--")):
            ax.plot(z, _column(table, f"S{field}_ddelta_{tag}", path), style,
                    color="k", label=f"field {field}")
        ax.set_title(f"width {tag.replace('p', '.')} gamma", fontsize=9)
        ax.set_xlabel("z C / gamma")
        ax.set_ylabel("quadrature noise")
    if len(fields) > 1:
        axes[0].legend(frameon=False)


_DRAWERS = {
    "fig2": _draw_fig2,
    "fig3": _draw_fig3,
    "fig4": _draw_fig4,
    "fig5": _draw_fig5,
    "fig6": _draw_fig6,
    "fig7": _draw_fig7,
    "fig8": _draw_fig8,
    "fig9": lambda axes, tables: _draw_doppler(axes, tables, (2,)),
    "fig10": lambda axes, tables: _draw_doppler(axes, tables, (2, 1)),
}


def render(figure_id: str, data_dir, out_path) -> Path:
    """Render one figure; no output file is written on error."""
    if figure_id not in RECIPES:
        raise PlotkitError(f"unknown figure id {figure_id!r}; choose from "
                           f"{', '.join(sorted(RECIPES))}")
    recipe = RECIPES[figure_id]
    data_dir = Path(data_dir)
    paths = [p for pattern in recipe.inputs
             for p in _resolve(data_dir, pattern)]
    tables = [(load_table(p), p) for p in paths]
    rows, cols = recipe.panels
    fig, axes = plt.subplots(rows, cols, figsize=_FIGSIZE, squeeze=False)
    flat = [ax for row in axes for ax in row]
    try:
        _DRAWERS[figure_id](flat, tables)
        fig.suptitle(recipe.description, fontsize=10)
        fig.tight_layout()
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, dpi=_DPI, metadata={"Software": None})
    finally:
        plt.close(fig)
    return out_path
