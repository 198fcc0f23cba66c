/** DOM renderers for the service's chart documents.
 *
 * Every number on screen is copied from a service response; these functions
 * only scale bars and format labels. Rendered elements carry data attributes
 * (data-score, data-display) so scripted tests can read exactly what the
 * engineer sees.
 */

import { barWidth, fmt2 } from "./format.js";
import type { BinDoc, ChartSetDoc, PreviewDoc, SummaryDoc } from "./types.js";

const PANEL_LABELS: Record<string, string> = {
  weighted_contribution: "weighted contribution",
  local_similarity: "local similarity",
  weight: "weight",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function barRow(attribute: string, value: number | null, scale: number): HTMLElement {
  const row = el("div", "bar-row");
  row.dataset.attribute = attribute;
  row.appendChild(el("span", "bar-label", attribute));
  const track = el("span", "bar-track");
  if (value === null) {
    row.dataset.display = "";
    row.classList.add("missing");
    track.appendChild(el("span", "bar-missing", "missing"));
    row.appendChild(track);
    row.appendChild(el("span", "bar-value", "--"));
  } else {
    const display = fmt2(value);
    row.dataset.display = display;
    const fill = el("span", "bar-fill");
    fill.style.width = `${barWidth(value, scale).toFixed(1)}%`;
    track.appendChild(fill);
    row.appendChild(track);
    row.appendChild(el("span", "bar-value", display));
  }
  return row;
}

/** Three-panel decomposition, one block per retrieved case in rank order. */
export function renderDecomposition(container: HTMLElement, chart: ChartSetDoc): void {
  container.replaceChildren();
  container.dataset.modelVersion = String(chart.model_version);
  const weightScale = Math.max(
    1e-9,
    ...chart.rows.flatMap((row) => row.panels.weight.filter((w): w is number => w !== null)),
  );
  for (const row of chart.rows) {
    const block = el("div", "decomp-row");
    block.dataset.rank = String(row.rank);
    block.dataset.caseId = row.case_id;
    block.dataset.score = fmt2(row.score);
    block.appendChild(
      el("div", "decomp-head", `#${row.rank}  ${row.case_id}  score ${fmt2(row.score)}`),
    );
    const panels = el("div", "decomp-panels");
    for (const key of ["weighted_contribution", "local_similarity", "weight"] as const) {
      const panel = el("div", "panel");
      panel.dataset.panel = key;
      panel.appendChild(el("div", "panel-title", PANEL_LABELS[key]));
      const scale = key === "weight" ? weightScale : 1.0;
      chart.attributes.forEach((attribute, index) => {
        panel.appendChild(barRow(attribute, row.panels[key][index], scale));
      });
      panels.appendChild(panel);
    }
    block.appendChild(panels);
    container.appendChild(block);
  }
}

function histogramSvg(bins: BinDoc[], preview: PreviewDoc | null): SVGSVGElement {
  const svgNS = "http://www.w3.org/2000/svg";
  const width = 420;
  const height = 180;
  const pad = 24;
  const svg = document.createElementNS(svgNS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "histogram");

  const peak = Math.max(1, ...bins.map((b) => b.count));
  const plotW = width - 2 * pad;
  const plotH = height - 2 * pad;
  const barW = bins.length ? plotW / bins.length : plotW;
  bins.forEach((bin, index) => {
    const h = (bin.count / peak) * plotH;
    const rect = document.createElementNS(svgNS, "rect");
    rect.setAttribute("x", (pad + index * barW).toFixed(1));
    rect.setAttribute("y", (height - pad - h).toFixed(1));
    rect.setAttribute("width", Math.max(barW - 1, 0.5).toFixed(1));
    rect.setAttribute("height", h.toFixed(1));
    rect.setAttribute("class", "hist-bar");
    svg.appendChild(rect);
  });

  if (preview && preview.points.length && bins.length) {
    const lo = bins[0].lower;
    const hi = bins[bins.length - 1].upper;
    const span = hi - lo || 1;
    const points = preview.points
      .map((p) => {
        const x = pad + ((p.value - lo) / span) * plotW;
        const y = height - pad - p.similarity * plotH;
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
    const line = document.createElementNS(svgNS, "polyline");
    line.setAttribute("points", points);
    line.setAttribute("class", "measure-curve");
    line.setAttribute("fill", "none");
    svg.appendChild(line);
  }
  return svg;
}

/** Histogram of the data distribution with the measure curve overlaid. */
export function renderDistribution(
  container: HTMLElement,
  summary: SummaryDoc,
  preview: PreviewDoc | null,
): void {
  container.replaceChildren();
  if (summary.count === 0 || !summary.bins.length) {
    container.appendChild(el("div", "no-data", "no data"));
    return;
  }
  const caption = el(
    "div",
    "dist-caption",
    `${summary.attribute}: n=${summary.count}, missing=${summary.missing}, ` +
      `range [${fmt2(summary.min)}, ${fmt2(summary.max)}]`,
  );
  container.appendChild(caption);
  container.appendChild(histogramSvg(summary.bins, preview));
}
