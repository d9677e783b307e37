"""Acceptance gate for the plotting package."""

import pytest

from altplots import CSV_COLUMNS, PlotError, preset_spec, render

from test_plots import GRID, family_dir, kappa_dir


def test_preset_figures_render_with_correct_accounting(tmp_path):
    """All three preset layouts render; every row is drawn exactly once."""
    d2 = family_dir(tmp_path / "f2", "fig2", ("nn_J1", "nn_J2"))
    d3 = family_dir(tmp_path / "f3", "fig3", ("nnn",))
    d4 = kappa_dir(tmp_path / "f4")
    for name, d, curves_per_panel, n_panels, rows in (
            ("fig2", d2, 3, 4, 12 * len(GRID)),
            ("fig3", d3, 3, 2, 6 * len(GRID)),
            ("fig4", d4, 6, 2, 12 * len(GRID))):
        out = tmp_path / f"{name}.png"
        report = render(preset_spec(name, str(d), str(out)))
        assert out.exists(), name
        assert len(report["panels"]) == n_panels, name
        assert all(len(p["curves"]) == curves_per_panel
                   for p in report["panels"]), name
        assert report["rows_read"] == rows, name
        assert report["points_drawn"] == rows, name
    (d3 / "fig3_beta_1.csv").write_text(",".join(CSV_COLUMNS) + "\n")
    with pytest.raises(PlotError, match="header-only"):
        render(preset_spec("fig3", str(d3), str(tmp_path / "bad.png")))
    print("ACCEPTANCE PASS: preset figures render with correct row "
          "accounting; header-only CSV rejected")
