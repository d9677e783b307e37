"""Declarative figure specification for sweep-CSV plots."""

import json
from dataclasses import dataclass, field


class PlotError(Exception):
    """Raised for unusable inputs or an inconsistent figure spec."""


@dataclass(frozen=True)
class CurveSource:
    """One input CSV and the legend label for the curves drawn from it."""

    path: str
    label: str

    @classmethod
    def from_dict(cls, d):
        return cls(path=str(d["path"]), label=str(d.get("label", d["path"])))


@dataclass(frozen=True)
class PanelSpec:
    """A single axes: one curve per source (times group values, if any).

    filters restricts which rows of each source are drawn, e.g.
    {"pair": "nnn"}.  group_by, when set, splits each source into one
    curve per distinct value of that column instead of one curve total.
    source_labels, when nonempty, restricts the panel to the sources
    with those legend labels.
    """

    x: str = "vary_value"
    y: str = "concurrence"
    filters: dict = field(default_factory=dict)
    group_by: str = ""
    source_labels: tuple = ()
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""

    @classmethod
    def from_dict(cls, d):
        return cls(x=d.get("x", "vary_value"), y=d.get("y", "concurrence"),
                   filters=dict(d.get("filters", {})),
                   group_by=d.get("group_by", ""),
                   source_labels=tuple(d.get("source_labels", ())),
                   title=d.get("title", ""), xlabel=d.get("xlabel", ""),
                   ylabel=d.get("ylabel", ""))


@dataclass(frozen=True)
class FigureSpec:
    """Layout, inputs and output of one rendered figure."""

    sources: tuple  # of CurveSource
    panels: tuple   # of PanelSpec, row-major
    rows: int
    cols: int
    output_path: str
    image_format: str = ""  # inferred from output_path when empty
    suptitle: str = ""

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise PlotError("panel layout must be at least 1x1")
        if len(self.panels) > self.rows * self.cols:
            raise PlotError(f"{len(self.panels)} panels do not fit a "
                            f"{self.rows}x{self.cols} layout")
        if not self.sources:
            raise PlotError("figure spec lists no input CSVs")
        fmt = self.resolved_format()
        if fmt not in ("png", "svg"):
            raise PlotError(f"unsupported image format {fmt!r}; "
                            "use png or svg")

    def resolved_format(self):
        if self.image_format:
            return self.image_format.lower()
        tail = self.output_path.rsplit(".", 1)
        return tail[1].lower() if len(tail) == 2 else ""

    @classmethod
    def from_dict(cls, d):
        try:
            sources = tuple(CurveSource.from_dict(s) for s in d["sources"])
            panels = tuple(PanelSpec.from_dict(p) for p in d["panels"])
            return cls(sources=sources, panels=panels,
                       rows=int(d["rows"]), cols=int(d["cols"]),
                       output_path=str(d["output_path"]),
                       image_format=d.get("image_format", ""),
                       suptitle=d.get("suptitle", ""))
        except KeyError as exc:
            raise PlotError(f"figure spec missing field {exc}") from None

    @classmethod
    def from_json(cls, path):
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except OSError as exc:
            raise PlotError(f"{path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise PlotError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(payload)
