import { EmotionScore, KbPaletteEntry, PaletteEntry } from "./types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

/** Horizontal strip of swatches sized by weight; colors come from the
 * API's hex values. */
export function paletteStrip(
  entries: Array<{ hex: string; weight: number; label: string }>,
): HTMLElement {
  const strip = el("div", "palette-strip");
  const total = entries.reduce((acc, e) => acc + e.weight, 0) || 1;
  for (const entry of entries) {
    const swatch = el("span", "swatch");
    swatch.style.backgroundColor = entry.hex;
    swatch.style.width = `${(100 * entry.weight) / total}%`;
    swatch.title = entry.label;
    strip.appendChild(swatch);
  }
  return strip;
}

export function imagePaletteStrip(palette: PaletteEntry[]): HTMLElement {
  return paletteStrip(
    palette.map((p) => ({
      hex: p.hex,
      weight: p.proportion,
      label: `${p.hue}/${p.saturation}/${p.intensity} ${(p.proportion * 100).toFixed(1)}%`,
    })),
  );
}

export function kbPaletteStrip(entries: KbPaletteEntry[]): HTMLElement {
  return paletteStrip(
    entries.map((e) => ({
      hex: e.hex,
      weight: e.frequency,
      label: `${e.hue}/${e.saturation}/${e.intensity} (${e.frequency})`,
    })),
  );
}

export function degreeBadge(degree: number): HTMLElement {
  const badge = el("span", "degree-badge", degree.toFixed(4));
  badge.dataset.degree = String(degree);
  return badge;
}

export function scoreList(scores: EmotionScore[]): HTMLElement {
  const table = el("table", "score-list");
  for (const score of scores) {
    const row = el("tr", "score-row");
    row.appendChild(el("td", "score-emotion", score.emotion));
    row.appendChild(el("td", "score-value", score.jaccard.toFixed(4)));
    table.appendChild(row);
  }
  return table;
}

export function basicColorBar(percent: Record<string, number>): HTMLElement {
  const bar = el("div", "basic-bar");
  for (const [name, value] of Object.entries(percent)) {
    if (value <= 0) continue;
    const segment = el("span", "basic-segment");
    segment.style.width = `${value}%`;
    segment.style.backgroundColor = name === "beige" ? "#f0e0c0" : name;
    segment.title = `${name} ${value.toFixed(1)}%`;
    bar.appendChild(segment);
  }
  return bar;
}

/** Emotion x basic-color table with cells shaded by percentage. */
export function heatmapTable(
  rows: Array<{ emotion: string; percent: Record<string, number> }>,
  columns: string[],
): HTMLElement {
  const table = el("table", "heatmap");
  const head = el("tr");
  head.appendChild(el("th", "", ""));
  for (const column of columns) head.appendChild(el("th", "", column));
  table.appendChild(head);
  for (const row of rows) {
    const tr = el("tr");
    tr.appendChild(el("th", "", row.emotion));
    for (const column of columns) {
      const value = row.percent[column] ?? 0;
      const cell = el("td", "heatmap-cell", value > 0 ? value.toFixed(1) : "");
      cell.style.backgroundColor = `rgba(200, 90, 30, ${Math.min(1, value / 50)})`;
      cell.dataset.value = String(value);
      tr.appendChild(cell);
    }
    table.appendChild(tr);
  }
  return table;
}

export function errorBox(message: string, onRetry?: () => void): HTMLElement {
  const box = el("div", "error-box");
  box.appendChild(el("span", "error-message", message));
  if (onRetry) {
    const retry = el("button", "retry-button", "retry");
    retry.addEventListener("click", onRetry);
    box.appendChild(retry);
  }
  return box;
}
