"""CSV reading and figure-kind layouts.

The producer writes a small comment block (``# key: value`` lines) above the
header row; the only line the renderer interprets is ``# experiment:``, which
names the sweep that generated the table. Each figure kind declares which
experiments it accepts and how the data columns decompose into roles:

``series``
    a solid line on the left axis,
``band``
    a ``<series>_ci`` half-width column drawn as a shaded band,
``reference``
    a dashed line on the left axis (closed-form companions of a series),
``secondary``
    a dotted line on a twin right axis (counts, ratios, success rates).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import HeaderMismatchError


@dataclass(frozen=True)
class Table:
    """One parsed experiment CSV."""

    meta: dict[str, str]
    header: tuple[str, ...]
    columns: dict[str, np.ndarray]

    @property
    def experiment(self) -> str:
        return self.meta.get("experiment", "")


def read_table(path: str | Path) -> Table:
    """Parse a producer CSV into metadata, header, and float columns."""
    meta: dict[str, str] = {}
    header: tuple[str, ...] = ()
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].partition(":")
                if sep:
                    meta[key.strip()] = value.strip()
                continue
            if not header:
                header = tuple(part.strip() for part in line.split(","))
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise HeaderMismatchError(
                    f"{path}: row {len(rows) + 1} has {len(parts)} fields, "
                    f"header has {len(header)}"
                )
            try:
                rows.append([float(part) for part in parts])
            except ValueError as exc:
                raise HeaderMismatchError(f"{path}: non-numeric cell: {exc}") from None
    if not header:
        raise HeaderMismatchError(f"{path}: no header row found")
    if not rows:
        raise HeaderMismatchError(f"{path}: no data rows under the header")
    if "experiment" not in meta:
        raise HeaderMismatchError(f"{path}: missing '# experiment:' metadata line")
    data = np.asarray(rows, dtype=np.float64)
    columns = {name: data[:, i] for i, name in enumerate(header)}
    return Table(meta=meta, header=header, columns=columns)


@dataclass(frozen=True)
class KindLayout:
    """What a figure kind expects from its CSV and how to draw it."""

    experiments: tuple[str, ...]
    x_columns: tuple[str, ...]
    roles: tuple[tuple[str, str], ...]  # (regex, role), first match wins
    shape: str  # human-readable column contract for diagnostics
    y_label: str
    y_scale: str  # default left-axis scale
    secondary_label: str = ""
    secondary_scale: str = "linear"


KINDS: dict[str, KindLayout] = {
    "acc_vs_bep": KindLayout(
        experiments=("acc_vs_bep",),
        x_columns=("bep",),
        roles=(
            (r"acc_gain\w+_ci$", "band"),
            (r"acc_gain\w+$", "series"),
            (r"bound_gain\w+$", "reference"),
        ),
        shape="bep, then per gain: acc_gain<g>, acc_gain<g>_ci, bound_gain<g>",
        y_label="classification accuracy",
        y_scale="linear",
    ),
    "acc_vs_views": KindLayout(
        experiments=("acc_vs_views",),
        x_columns=("views",),
        roles=(
            (r"acc_bep\w+_ci$", "band"),
            (r"acc_bep\w+$", "series"),
            (r"bound_bep\w+$", "reference"),
        ),
        shape="views, then per bep: acc_bep<p>, acc_bep<p>_ci, bound_bep<p>",
        y_label="classification accuracy",
        y_scale="linear",
    ),
    "acc_vs_retx": KindLayout(
        experiments=("acc_vs_retx",),
        x_columns=("transmissions",),
        roles=(
            (r"acc_bep\w+_ci$", "band"),
            (r"acc_bep\w+$", "series"),
            (r"bound_bep\w+$", "reference"),
        ),
        shape="transmissions, then per bep: acc_bep<p>, acc_bep<p>_ci, bound_bep<p>",
        y_label="classification accuracy",
        y_scale="linear",
    ),
    "latency_vs_bep": KindLayout(
        experiments=("latency_vs_bep",),
        x_columns=("bep",),
        roles=(
            (r"latency_s_xi\w+$", "series"),
            (r"retx_xi\w+$", "secondary"),
        ),
        shape="bep, then per xi: retx_xi<x>, latency_s_xi<x>",
        y_label="latency [s]",
        y_scale="log",
        secondary_label="transmissions",
        secondary_scale="log",
    ),
    "latency_vs_snr": KindLayout(
        experiments=("latency_vs_snr",),
        x_columns=("snr_db",),
        roles=(
            (r"latency_s_(adaptive|coded)$", "series"),
            (r"coded_over_adaptive$", "secondary"),
        ),
        shape="snr_db, latency_s_adaptive, latency_s_coded, coded_over_adaptive",
        y_label="latency [s]",
        y_scale="log",
        secondary_label="coded / adaptive",
    ),
    "explore_latency": KindLayout(
        experiments=("explore_latency_vs_bep", "explore_latency_vs_snr"),
        x_columns=("bep", "snr_db"),
        roles=(
            (r"latency_s_\w+_ci$", "band"),
            (r"latency_s_\w+$", "series"),
            (r"success_\w+$", "secondary"),
        ),
        shape=(
            "bep|snr_db, then per series: latency_s_<s>, latency_s_<s>_ci, "
            "success_<s>"
        ),
        y_label="episode latency [s]",
        y_scale="log",
        secondary_label="success rate",
    ),
    "latency_vs_arrival": KindLayout(
        experiments=("latency_vs_arrival",),
        x_columns=("arrival_rate_hz",),
        roles=(
            (r"latency_s_\w+_ci$", "band"),
            (r"latency_s_\w+$", "series"),
            (r"success_\w+$", "secondary"),
        ),
        shape=(
            "arrival_rate_hz, then per option: latency_s_<o>, "
            "latency_s_<o>_ci, success_<o>"
        ),
        y_label="episode latency [s]",
        y_scale="log",
        secondary_label="success rate",
    ),
}


@dataclass(frozen=True)
class ColumnPlan:
    """Columns of a validated table, sorted into drawing roles."""

    x: str
    series: tuple[str, ...]
    bands: dict[str, str]  # series name -> ci column name
    references: tuple[str, ...]
    secondary: tuple[str, ...]


def classify_columns(kind: str, table: Table) -> ColumnPlan:
    """Check a table against a figure kind and sort its columns into roles.

    Raises HeaderMismatchError naming the expected column shape and the
    columns actually found whenever the table does not fit.
    """
    layout = KINDS[kind]
    found = ", ".join(table.header)
    if table.experiment not in layout.experiments:
        raise HeaderMismatchError(
            f"figure kind {kind!r} renders experiment "
            f"{' or '.join(repr(e) for e in layout.experiments)}, but the CSV "
            f"says '# experiment: {table.experiment}'"
        )
    x = table.header[0]
    if x not in layout.x_columns:
        raise HeaderMismatchError(
            f"figure kind {kind!r} expects x column "
            f"{' or '.join(repr(c) for c in layout.x_columns)}; "
            f"expected shape: {layout.shape}; found columns: {found}"
        )
    series: list[str] = []
    ci_columns: list[str] = []
    references: list[str] = []
    secondary: list[str] = []
    buckets = {"series": series, "band": ci_columns,
               "reference": references, "secondary": secondary}
    for name in table.header[1:]:
        for pattern, role in layout.roles:
            if re.fullmatch(pattern, name):
                buckets[role].append(name)
                break
        else:
            raise HeaderMismatchError(
                f"column {name!r} does not belong to figure kind {kind!r}; "
                f"expected shape: {layout.shape}; found columns: {found}"
            )
    if not series:
        raise HeaderMismatchError(
            f"no data series for figure kind {kind!r}; "
            f"expected shape: {layout.shape}; found columns: {found}"
        )
    bands: dict[str, str] = {}
    for ci in ci_columns:
        base = ci[: -len("_ci")]
        if base not in series:
            raise HeaderMismatchError(
                f"confidence column {ci!r} has no matching series {base!r}; "
                f"found columns: {found}"
            )
        bands[base] = ci
    return ColumnPlan(
        x=x,
        series=tuple(series),
        bands=bands,
        references=tuple(references),
        secondary=tuple(secondary),
    )
