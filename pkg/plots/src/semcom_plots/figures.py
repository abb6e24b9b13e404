"""PlotSpec handling and matplotlib rendering.

Everything here is batch plumbing: read one CSV, draw one figure, write the
PNG and SVG next to each other. Rendering is deterministic — the style is
pinned in ``style.mplstyle``, SVG ids are salted with a fixed string, and the
savefig metadata that would normally embed a date or toolchain string is
stripped — so re-rendering the same CSV reproduces both files byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import SpecError
from .tables import KINDS, Table, classify_columns, read_table

_SCALES = ("linear", "log")
_SPEC_KEYS = {"csv", "kind", "out", "x_scale", "y_scale"}


@dataclass(frozen=True)
class PlotSpec:
    """One figure to render: input CSV, figure kind, output base path."""

    csv: Path
    kind: str
    out: Path
    x_scale: str = "linear"
    y_scale: str = ""  # empty -> the kind's default

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            known = ", ".join(sorted(KINDS))
            raise SpecError(f"unknown figure kind {self.kind!r}; known kinds: {known}")
        if self.x_scale not in _SCALES:
            raise SpecError(f"x_scale must be one of {_SCALES}, got {self.x_scale!r}")
        if self.y_scale not in _SCALES and self.y_scale != "":
            raise SpecError(f"y_scale must be one of {_SCALES}, got {self.y_scale!r}")


def _spec_from_dict(entry: dict, index: int, base_dir: Path) -> PlotSpec:
    if not isinstance(entry, dict):
        raise SpecError(f"spec entry {index} is not an object: {entry!r}")
    unknown = set(entry) - _SPEC_KEYS
    if unknown:
        raise SpecError(
            f"spec entry {index} has unknown keys {sorted(unknown)}; "
            f"allowed keys: {sorted(_SPEC_KEYS)}"
        )
    missing = {"csv", "kind", "out"} - set(entry)
    if missing:
        raise SpecError(f"spec entry {index} is missing keys {sorted(missing)}")
    # a bare output name like "figs/acc" means figs/acc.png + figs/acc.svg;
    # a trailing .png/.svg is tolerated and stripped
    out = Path(entry["out"])
    if out.suffix in (".png", ".svg"):
        out = out.with_suffix("")
    csv = Path(entry["csv"])
    if not csv.is_absolute():
        csv = base_dir / csv
    if not out.is_absolute():
        out = base_dir / out
    return PlotSpec(
        csv=csv,
        kind=str(entry["kind"]),
        out=out,
        x_scale=str(entry.get("x_scale", "linear")),
        y_scale=str(entry.get("y_scale", "")),
    )


def load_specs(path: str | Path) -> list[PlotSpec]:
    """Read a JSON list of plot specs; relative paths resolve beside the file."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(payload, list) or not payload:
        raise SpecError(f"{path} must hold a non-empty JSON list of plot specs")
    return [_spec_from_dict(e, i, path.parent) for i, e in enumerate(payload)]


def _style_path() -> str:
    return str(resources.files("semcom_plots") / "style.mplstyle")


def build_figure(spec: PlotSpec, table: Table):
    """Assemble the matplotlib Figure for a validated spec + table."""
    layout = KINDS[spec.kind]
    plan = classify_columns(spec.kind, table)
    x = table.columns[plan.x]
    with plt.style.context(_style_path()):
        fig, ax = plt.subplots()
        colors: dict[str, str] = {}
        for name in plan.series:
            (line,) = ax.plot(x, table.columns[name], marker="o", label=name)
            colors[name] = line.get_color()
        for name, ci_name in plan.bands.items():
            y, ci = table.columns[name], table.columns[ci_name]
            ax.fill_between(x, y - ci, y + ci, color=colors[name],
                            alpha=0.2, linewidth=0.0)
        for name in plan.references:
            ax.plot(x, table.columns[name], linestyle="--", label=name)
        handles, labels = ax.get_legend_handles_labels()
        if plan.secondary:
            twin = ax.twinx()
            twin.set_yscale(layout.secondary_scale)
            for name in plan.secondary:
                twin.plot(x, table.columns[name], linestyle=":", marker="s",
                          label=name)
            twin.set_ylabel(layout.secondary_label)
            twin.grid(False)
            more_handles, more_labels = twin.get_legend_handles_labels()
            handles += more_handles
            labels += more_labels
        ax.set_xscale(spec.x_scale)
        ax.set_yscale(spec.y_scale or layout.y_scale)
        ax.set_xlabel(plan.x)
        ax.set_ylabel(layout.y_label)
        ax.set_title(table.experiment)
        ax.legend(handles, labels, loc="best")
        fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> tuple[Path, Path]:
    """Render one spec; returns the written (png, svg) paths."""
    table = read_table(spec.csv)
    fig = build_figure(spec, table)
    png = spec.out.with_suffix(".png")
    svg = spec.out.with_suffix(".svg")
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    try:
        # the SVG backend reads svg.fonttype and svg.hashsalt at save time,
        # so the pinned style must wrap savefig as well; the metadata
        # arguments drop the version string and date that would otherwise
        # keep byte-identical inputs from producing byte-identical files
        with plt.style.context(_style_path()):
            fig.savefig(png, format="png", metadata={"Software": None})
            fig.savefig(svg, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return png, svg
