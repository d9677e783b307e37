"""Figure rendering from sweep CSVs."""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from altplots.csvdata import CSV_COLUMNS, read_rows  # noqa: E402
from altplots.figspec import (CurveSource, FigureSpec, PanelSpec,  # noqa: E402
                              PlotError)

# small fixed theme so re-renders are byte-stable and legible
_THEME = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "lines.markersize": 3.0,
    "legend.fontsize": 7,
    "svg.hashsalt": "altplots",
}

_MARKERS = "osD^v<>ph"


def _check_columns(panel):
    used = {panel.x, panel.y, *panel.filters}
    if panel.group_by:
        used.add(panel.group_by)
    unknown = used - set(CSV_COLUMNS)
    if unknown:
        raise PlotError(f"panel references unknown columns {sorted(unknown)}")


def _panel_curves(panel, sources, data):
    """Yield (label, rows) pairs for one panel, in deterministic order."""
    chosen = [s for s in sources
              if not panel.source_labels or s.label in panel.source_labels]
    if not chosen:
        raise PlotError(f"panel {panel.title!r} matches no input source")
    for src in chosen:
        rows = [r for r in data[src.path]
                if all(str(r[k]) == str(v) or r[k] == v
                       for k, v in panel.filters.items())]
        if panel.group_by:
            for value in sorted({r[panel.group_by] for r in rows}, key=str):
                sub = [r for r in rows if r[panel.group_by] == value]
                yield f"{src.label} {panel.group_by}={value}", sub
        else:
            yield src.label, rows


def render(spec: FigureSpec):
    """Draw the figure and return a row-accounting report.

    The report maps each panel title to its curves with point counts and
    carries figure totals (rows_read across sources, points_drawn across
    curves).  Input files are only ever opened for reading.
    """
    for panel in spec.panels:
        _check_columns(panel)
    data = {}
    for src in spec.sources:
        if src.path not in data:
            data[src.path] = read_rows(src.path)
    rows_read = sum(len(v) for v in data.values())

    report = {"output": spec.output_path, "rows_read": rows_read,
              "points_drawn": 0, "panels": []}
    with plt.rc_context(_THEME):
        fig, axes = plt.subplots(spec.rows, spec.cols,
                                 figsize=(3.2 * spec.cols, 2.6 * spec.rows),
                                 squeeze=False)
        for k, panel in enumerate(spec.panels):
            ax = axes[k // spec.cols][k % spec.cols]
            entry = {"title": panel.title, "curves": []}
            for c, (label, rows) in enumerate(
                    _panel_curves(panel, spec.sources, data)):
                if not rows:
                    raise PlotError(
                        f"panel {panel.title!r}: no rows left for curve "
                        f"{label!r} after filters {panel.filters}")
                pts = sorted((r[panel.x], r[panel.y]) for r in rows)
                ax.plot([p[0] for p in pts], [p[1] for p in pts],
                        marker=_MARKERS[c % len(_MARKERS)], label=label)
                entry["curves"].append({"label": label, "points": len(pts)})
                report["points_drawn"] += len(pts)
            ax.set_title(panel.title)
            ax.set_xlabel(panel.xlabel or panel.x)
            ax.set_ylabel(panel.ylabel or panel.y)
            ax.legend()
            report["panels"].append(entry)
        for k in range(len(spec.panels), spec.rows * spec.cols):
            axes[k // spec.cols][k % spec.cols].axis("off")
        if spec.suptitle:
            fig.suptitle(spec.suptitle)
        fig.tight_layout()
        fmt = spec.resolved_format()
        metadata = {"Date": None} if fmt == "svg" else None
        out_dir = os.path.dirname(spec.output_path)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        fig.savefig(spec.output_path, format=fmt, metadata=metadata)
        plt.close(fig)
    return report


def _family_sources(in_dir, name):
    pairs = [("alpha", "0.5"), ("alpha", "1"), ("alpha", "1.5"),
             ("beta", "0.5"), ("beta", "1"), ("beta", "1.5")]
    return tuple(CurveSource(path=os.path.join(in_dir, f"{name}_{p}_{v}.csv"),
                             label=f"{p}={v}") for p, v in pairs)


def _kappa_sources(in_dir):
    values = ("-0.8", "-0.4", "0", "0.25", "0.5", "0.75")
    return tuple(CurveSource(path=os.path.join(in_dir, f"fig4_kappa_{v}.csv"),
                             label=f"kappa={v}") for v in values)


_ALPHA = ("alpha=0.5", "alpha=1", "alpha=1.5")
_BETA = ("beta=0.5", "beta=1", "beta=1.5")


def preset_spec(name, in_dir, out_path):
    """Built-in figure layouts over the CSV families the sweep tool emits."""
    if name == "fig2":
        panels = tuple(
            PanelSpec(filters={"pair": pair}, source_labels=labels,
                      title=f"C({pair}), {family} family",
                      xlabel="lambda", ylabel="concurrence")
            for pair in ("nn_J1", "nn_J2")
            for family, labels in (("alpha", _ALPHA), ("beta", _BETA)))
        return FigureSpec(sources=_family_sources(in_dir, "fig2"),
                          panels=panels, rows=2, cols=2, output_path=out_path,
                          suptitle="nearest-neighbour concurrence")
    if name == "fig3":
        panels = tuple(
            PanelSpec(filters={"pair": "nnn"}, source_labels=labels,
                      title=f"C(nnn), {family} family",
                      xlabel="lambda", ylabel="concurrence")
            for family, labels in (("alpha", _ALPHA), ("beta", _BETA)))
        return FigureSpec(sources=_family_sources(in_dir, "fig3"),
                          panels=panels, rows=1, cols=2, output_path=out_path,
                          suptitle="next-nearest-neighbour concurrence")
    if name == "fig4":
        panels = tuple(
            PanelSpec(filters={"pair": pair}, title=f"C({pair})",
                      xlabel="lambda", ylabel="concurrence")
            for pair in ("nn_J1", "nnn"))
        return FigureSpec(sources=_kappa_sources(in_dir), panels=panels,
                          rows=1, cols=2, output_path=out_path,
                          suptitle="frustrated chain concurrence")
    raise PlotError(f"unknown preset {name!r}")


PRESETS = ("fig2", "fig3", "fig4")
