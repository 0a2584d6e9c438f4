"""Render sweep-table CSVs into the three standard figures.

Figure kinds:

* ``trace``        - coherence factor versus dimensionless time, one line per
                     chain size (columns n, theta_t, mean_c1);
* ``loglog_pure``  - noiseless minimum uncertainty versus size for both
                     schemes on log-log axes (columns n, scheme, delta_min);
* ``loglog_noisy`` - optimized noisy uncertainty versus size per rate
                     (columns n, scheme, noise_type, rate, tau_opt,
                     delta_min, eq23_value).  W-state values are drawn as
                     markers, uncorrelated as lines; both the stated
                     uncorrelated minimum and the numerically minimized
                     envelope appear as separate series so their gap stays
                     visible.

Rendering is read-only over inputs; the output file is the only side effect.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .csvio import SchemaError, Table, read_table, require_columns

FIGURE_KINDS = ("trace", "loglog_pure", "loglog_noisy")

_SCHEMAS = {
    "trace": ("n", "theta_t", "mean_c1"),
    "loglog_pure": ("n", "scheme", "delta_min"),
    "loglog_noisy": (
        "n", "scheme", "noise_type", "rate", "tau_opt", "delta_min", "eq23_value",
    ),
}

_RATE_COLORS = ("black", "tab:blue", "tab:red", "tab:green", "tab:purple")
_W_MARKERS = ("o", "s", "^", "D", "v")


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    figure_kind: str
    out_path: str

    def __post_init__(self) -> None:
        if self.figure_kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.figure_kind!r}")


def _plot_trace(ax, table: Table) -> None:
    sizes = sorted(set(table.column("n")))
    for n in sizes:
        points = [(row[1], row[2]) for row in table.rows if row[0] == n]
        points.sort()
        ax.plot([p[0] for p in points], [p[1] for p in points], label=f"N = {n}")
    ax.set_xlabel(r"$\theta_1 t$")
    ax.set_ylabel(r"$\langle C_1 \rangle$")
    ax.legend()


def _plot_loglog_pure(ax, table: Table) -> None:
    for scheme, style in (("w_state", "ko-"), ("uncorrelated_pair", "b--")):
        points = sorted(
            (row[0], row[2]) for row in table.rows if row[1] == scheme
        )
        if not points:
            raise SchemaError(f"no rows for scheme {scheme!r}")
        ax.loglog([p[0] for p in points], [p[1] for p in points], style,
                  markersize=3, label=scheme.replace("_", " "))
    ax.set_xlabel("N")
    ax.set_ylabel(r"$\delta\Theta_{\mathrm{min}}$")
    ax.legend()


def _plot_loglog_noisy(ax, table: Table) -> None:
    rates = sorted(set(table.column("rate")))
    noise_types = sorted(set(table.column("noise_type")))
    for i, rate in enumerate(rates):
        color = _RATE_COLORS[i % len(_RATE_COLORS)]
        marker = _W_MARKERS[i % len(_W_MARKERS)]
        w = sorted(
            (row[0], row[5])
            for row in table.rows
            if row[1] == "w_state" and row[3] == rate
        )
        u_stated = sorted(
            (row[0], row[6])
            for row in table.rows
            if row[1] == "uncorrelated_pair" and row[3] == rate and row[6] is not None
        )
        u_envelope = sorted(
            (row[0], row[5])
            for row in table.rows
            if row[1] == "uncorrelated_pair" and row[3] == rate
        )
        if not w or not u_envelope:
            raise SchemaError(f"missing scheme rows for rate {rate}")
        ax.loglog(
            [p[0] for p in w], [p[1] for p in w],
            linestyle="none", marker=marker, color=color,
            label=f"W state, rate {rate:g}",
        )
        if u_stated:
            ax.loglog(
                [p[0] for p in u_stated], [p[1] for p in u_stated],
                linestyle="-", color=color,
                label=f"uncorrelated (stated), rate {rate:g}",
            )
        ax.loglog(
            [p[0] for p in u_envelope], [p[1] for p in u_envelope],
            linestyle=":", color=color,
            label=f"uncorrelated (envelope), rate {rate:g}",
        )
    ax.set_xlabel("N")
    ax.set_ylabel(r"$\delta\theta_{\mathrm{min}}/\theta_1$")
    ax.set_title(" / ".join(noise_types))
    ax.legend(fontsize=7)


_PLOTTERS = {
    "trace": _plot_trace,
    "loglog_pure": _plot_loglog_pure,
    "loglog_noisy": _plot_loglog_noisy,
}


def render(spec: FigureSpec) -> str:
    """Validate the input against the figure kind and write the image.

    Returns the output path.  Nothing is written if validation fails.
    """
    table = read_table(spec.input_csv)
    require_columns(table, _SCHEMAS[spec.figure_kind], spec.figure_kind)
    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=150)
    try:
        _PLOTTERS[spec.figure_kind](ax, table)
        fig.tight_layout()
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return spec.out_path
