"""Chart-ready projections of retrieval results and their rendering.

A decomposition chart set is a pure projection of a retrieval result: one row
per retrieved case in rank order, three panels per row (weighted contribution,
local similarity, weight), all panels sharing the attribute axis in schema
declaration order. Rendering emits standalone SVG or plain-text documents and
is strictly deterministic: no timestamps, stable element order, fixed number
formatting (2 decimals, matching the precision the engineer sees).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import SchemaViolationError, ValidationError
from .ingestion import DistributionSummary, HistogramBin
from .model import (
    AttributeDescriptor,
    AttributeKind,
    LocalSimilarityMeasure,
    TableMeasure,
    local_similarity,
)
from .retrieval import RetrievalResult

PANEL_TITLES = ("weighted contribution", "local similarity", "weight")


@dataclass(frozen=True)
class ChartRow:
    """One retrieved case's three panels; vectors align with the shared axis."""

    rank: int
    case_id: str
    score: float
    contributions: tuple[float | None, ...]
    local_sims: tuple[float | None, ...]
    weights_raw: tuple[float, ...]
    weights_normalized: tuple[float | None, ...]


@dataclass(frozen=True)
class DecompositionChartSet:
    attributes: tuple[str, ...]
    model_version: int
    rows: tuple[ChartRow, ...]


def build_chart_set(result: RetrievalResult, top: int) -> DecompositionChartSet:
    """Project the ``top`` highest-ranked entries into chart rows.

    Values are copied from the entries' explanations, never recomputed.
    """
    if not result.entries:
        raise ValidationError("cannot chart an empty retrieval result")
    if top < 1:
        raise ValueError(f"top must be >= 1, got {top}")
    if top > len(result.entries):
        raise ValidationError(
            f"top={top} exceeds the {len(result.entries)} retrieved entries"
        )

    attributes = tuple(row.attribute for row in result.entries[0].explanation.rows)
    rows = []
    for rank, entry in enumerate(result.entries[:top], start=1):
        by_name = {row.attribute: row for row in entry.explanation.rows}
        ordered = [by_name[name] for name in attributes]
        rows.append(
            ChartRow(
                rank=rank,
                case_id=entry.case_id,
                score=entry.score,
                contributions=tuple(row.contribution for row in ordered),
                local_sims=tuple(row.local_sim for row in ordered),
                weights_raw=tuple(row.weight_raw for row in ordered),
                weights_normalized=tuple(row.weight_normalized for row in ordered),
            )
        )
    return DecompositionChartSet(
        attributes=attributes, model_version=result.model_version, rows=tuple(rows)
    )


def measure_preview(
    measure: LocalSimilarityMeasure,
    descriptor: AttributeDescriptor,
    samples: int,
) -> tuple[tuple[float, float], ...]:
    """Similarity curve of uniformly sampled values against the range midpoint.

    The midpoint anchor is symmetric and parameter-free; interactive callers
    may evaluate against any other reference themselves.
    """
    if isinstance(measure, TableMeasure) or descriptor.kind is not AttributeKind.NUMERIC:
        raise SchemaViolationError(
            f"measure preview needs a numeric measure, attribute {descriptor.name!r} is symbolic"
        )
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    if descriptor.minimum is None or descriptor.maximum is None:
        raise SchemaViolationError(
            f"attribute {descriptor.name!r} has no value range to sample"
        )
    lo, hi = descriptor.minimum, descriptor.maximum
    reference = (lo + hi) / 2.0
    step = (hi - lo) / (samples - 1)
    points = []
    for i in range(samples):
        value = hi if i == samples - 1 else lo + i * step
        sim = local_similarity(measure, descriptor, value, reference)
        points.append((value, sim))
    return tuple(points)


def render_charts(chart: DecompositionChartSet | DistributionSummary, format: str) -> str:
    """Render a chart set or distribution summary to a standalone document."""
    if format == "text":
        if isinstance(chart, DecompositionChartSet):
            return _chart_set_text(chart)
        return _summary_text(chart)
    if format == "svg":
        if isinstance(chart, DecompositionChartSet):
            return _chart_set_svg(chart)
        return _summary_svg(chart)
    raise ValidationError(f"unsupported render format {format!r} (expected svg or text)")


# -- text rendering ----------------------------------------------------------

_BAR_WIDTH = 24


def _bar(value: float | None, scale: float = 1.0) -> str:
    if value is None:
        return "(missing)".ljust(_BAR_WIDTH + 2)
    filled = 0
    if scale > 0:
        filled = min(_BAR_WIDTH, int(round((value / scale) * _BAR_WIDTH)))
    return "|" + "#" * filled + "." * (_BAR_WIDTH - filled) + "|"


def _chart_set_text(chart: DecompositionChartSet) -> str:
    name_width = max((len(a) for a in chart.attributes), default=0)
    weight_scale = max(
        (w for row in chart.rows for w in row.weights_raw), default=1.0
    ) or 1.0
    lines = []
    for row in chart.rows:
        lines.append(f"# {row.rank}  {row.case_id}  score {row.score:.2f}")
        panels = (
            (PANEL_TITLES[0], row.contributions, 1.0),
            (PANEL_TITLES[1], row.local_sims, 1.0),
            (PANEL_TITLES[2], row.weights_raw, weight_scale),
        )
        for title, values, scale in panels:
            lines.append(f"  {title}")
            for attribute, value in zip(chart.attributes, values):
                label = "   --" if value is None else f"{value:5.2f}"
                lines.append(f"    {attribute.ljust(name_width)}  {_bar(value, scale)} {label}")
        lines.append("")
    return "\n".join(lines)


def _summary_text(summary: DistributionSummary) -> str:
    lines = [f"{summary.attribute}: n={summary.count} missing={summary.missing}"]
    if summary.count == 0 or not summary.bins:
        lines.append("  (no data)")
        return "\n".join(lines) + "\n"
    lines.append(
        f"  min={summary.minimum:.2f} max={summary.maximum:.2f}"
        f" mean={summary.mean:.2f} stddev={summary.stddev:.2f}"
    )
    lines.extend(_histogram_text(summary.bins))
    if summary.groups:
        for label, bins in summary.groups.items():
            lines.append(f"  [{summary.attribute} | solution={label}]")
            lines.extend(_histogram_text(bins))
    return "\n".join(lines) + "\n"


def _histogram_text(bins: Sequence[HistogramBin]) -> list[str]:
    peak = max((b.count for b in bins), default=0)
    scale = float(peak) if peak > 0 else 1.0
    lines = []
    for b in bins:
        lines.append(
            f"    [{b.lower:8.2f}, {b.upper:8.2f}]  {_bar(float(b.count), scale)} {b.count}"
        )
    return lines


# -- svg rendering -----------------------------------------------------------

_SVG_BAR_MAX = 120.0
_ROW_H = 16.0
_PANEL_W = 230.0
_LABEL_W = 96.0


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def _svg_header(width: float, height: float) -> str:
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}" font-family="monospace" font-size="11">'
    )


def _svg_bar_group(
    x: float,
    y: float,
    title: str,
    labels: Sequence[str],
    values: Sequence[float | None],
    scale: float,
    color: str,
) -> list[str]:
    parts = [f'<text x="{x:.1f}" y="{y:.1f}" font-weight="bold">{_esc(title)}</text>']
    bar_x = x + _LABEL_W
    for i, (label, value) in enumerate(zip(labels, values)):
        row_y = y + 8.0 + i * _ROW_H
        parts.append(f'<text x="{x:.1f}" y="{row_y + 11.0:.1f}">{_esc(label)}</text>')
        if value is None:
            parts.append(
                f'<text x="{bar_x:.1f}" y="{row_y + 11.0:.1f}" fill="#999">missing</text>'
            )
            continue
        width = 0.0 if scale <= 0 else max(0.0, min(1.0, value / scale)) * _SVG_BAR_MAX
        parts.append(
            f'<rect x="{bar_x:.1f}" y="{row_y + 3.0:.1f}" width="{width:.1f}" '
            f'height="{_ROW_H - 6.0:.1f}" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{bar_x + _SVG_BAR_MAX + 6.0:.1f}" y="{row_y + 11.0:.1f}">{value:.2f}</text>'
        )
    return parts


def _chart_set_svg(chart: DecompositionChartSet) -> str:
    n = len(chart.attributes)
    block_h = 8.0 + n * _ROW_H + 30.0
    width = 3 * _PANEL_W + 40.0
    height = 20.0 + len(chart.rows) * block_h
    weight_scale = max(
        (w for row in chart.rows for w in row.weights_raw), default=1.0
    ) or 1.0
    labels = [_short(a) for a in chart.attributes]

    parts = [_svg_header(width, height)]
    for row_index, row in enumerate(chart.rows):
        top = 20.0 + row_index * block_h
        parts.append(
            f'<text x="20.0" y="{top:.1f}" font-weight="bold">'
            f"#{row.rank} {_esc(row.case_id)} score {row.score:.2f}</text>"
        )
        panels = (
            (PANEL_TITLES[0], row.contributions, 1.0, "#4878a8"),
            (PANEL_TITLES[1], row.local_sims, 1.0, "#6aa84f"),
            (PANEL_TITLES[2], row.weights_raw, weight_scale, "#b0771e"),
        )
        for panel_index, (title, values, scale, color) in enumerate(panels):
            x = 20.0 + panel_index * _PANEL_W
            parts.extend(_svg_bar_group(x, top + 16.0, title, labels, values, scale, color))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _summary_svg(summary: DistributionSummary) -> str:
    charts: list[tuple[str, tuple[HistogramBin, ...]]] = [(summary.attribute, summary.bins)]
    if summary.groups:
        charts.extend(
            (f"{summary.attribute} | solution={label}", bins)
            for label, bins in summary.groups.items()
        )

    chart_h = 140.0
    width = 520.0
    height = 20.0 + len(charts) * chart_h
    parts = [_svg_header(width, height)]
    for chart_index, (title, bins) in enumerate(charts):
        top = 20.0 + chart_index * chart_h
        parts.append(f'<text x="20.0" y="{top:.1f}" font-weight="bold">{_esc(title)}</text>')
        if not bins or all(b.count == 0 for b in bins):
            parts.append(f'<text x="20.0" y="{top + 40.0:.1f}" fill="#999">no data</text>')
            continue
        peak = max(b.count for b in bins)
        plot_w = width - 60.0
        bar_w = plot_w / len(bins)
        base_y = top + 110.0
        for i, b in enumerate(bins):
            bar_h = 0.0 if peak == 0 else (b.count / peak) * 90.0
            x = 30.0 + i * bar_w
            parts.append(
                f'<rect x="{x:.1f}" y="{base_y - bar_h:.1f}" width="{max(bar_w - 1.0, 0.5):.1f}" '
                f'height="{bar_h:.1f}" fill="#4878a8"/>'
            )
        first, last = bins[0], bins[-1]
        parts.append(f'<text x="30.0" y="{base_y + 14.0:.1f}">{first.lower:.2f}</text>')
        parts.append(
            f'<text x="{30.0 + plot_w - 40.0:.1f}" y="{base_y + 14.0:.1f}">{last.upper:.2f}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _short(name: str, limit: int = 12) -> str:
    return name if len(name) <= limit else name[: limit - 2] + ".."
