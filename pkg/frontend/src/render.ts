// DOM rendering for the dot-plot columns and the status toolbox.
// Pure document-API code so it runs against any DOM implementation.

import type { GroupedView, Solution } from "./grouping.js";
import type { SessionState } from "./api.js";
import type { ViewState } from "./view.js";

/** pass column highlighted; Fails-1 darkest, fading with more failures */
export function groupColor(failCount: number, k: number): string {
  if (failCount === 0) return "#e6b422";
  const t = k > 1 ? (failCount - 1) / (k - 1) : 0;
  const shade = Math.round(40 + t * 140);
  return `rgb(${shade}, ${shade}, ${shade})`;
}

export function columnTitles(k: number): string[] {
  const titles = ["All solutions", "Pass all"];
  for (let c = 1; c <= k; c++) titles.push(`Fails ${c}`);
  return titles;
}

function renderColumn(
  doc: Document,
  title: string,
  solutions: Solution[],
  k: number,
  failCount: number | null,
  view: ViewState,
): HTMLElement {
  const col = doc.createElement("div");
  col.className = "column";
  const head = doc.createElement("h3");
  head.textContent = `${title} (${solutions.length})`;
  col.appendChild(head);
  const explored = view.explored(solutions);
  for (const s of view.visible(solutions)) {
    const row = doc.createElement("div");
    row.className = "dot-row";
    row.dataset.evalIndex = String(s.eval_index);
    const isExplored = explored !== null && s.eval_index === explored.eval_index;
    if (isExplored) row.classList.add("explored");
    for (let i = 0; i < s.f.length; i++) {
      const dot = doc.createElement("span");
      dot.className = "dot";
      dot.style.backgroundColor =
        failCount === null ? "#888" : groupColor(failCount, k);
      dot.title = `f${i + 1} = ${s.f[i]}`;
      if (isExplored) {
        const label = doc.createElement("span");
        label.className = "dot-label";
        label.textContent = s.f[i].toPrecision(6);
        dot.appendChild(label);
      }
      row.appendChild(dot);
    }
    col.appendChild(row);
  }
  return col;
}

/**
 * Render the fixed column set: All solutions, Pass all, Fails 1..k.
 * Empty groups render as empty columns so the layout never jumps.
 */
export function renderColumns(
  doc: Document,
  root: HTMLElement,
  solutions: Solution[],
  grouped: GroupedView,
  k: number,
  view: ViewState,
): void {
  root.textContent = "";
  root.appendChild(renderColumn(doc, "All solutions", solutions, k, null, view));
  const titles = columnTitles(k);
  for (let c = 0; c <= k; c++) {
    root.appendChild(
      renderColumn(doc, titles[c + 1], grouped.groups[c] ?? [], k, c, view),
    );
  }
}

export function renderToolbox(root: HTMLElement, state: SessionState): void {
  const fmt = (v: number) => (Number.isFinite(v) ? v.toFixed(1) : "-");
  const rows: [string, string][] = [
    ["Status", state.run_status],
    ["Evaluations", String(state.eval_count)],
    ["Evals left", String(state.evals_left)],
    ["Avg eval time", `${(state.avg_eval_time * 1000).toFixed(2)} ms`],
    ["Estim. time left", `${fmt(state.estimated_time_left)} s`],
    ["Elapsed total", `${fmt(state.elapsed_total)} s`],
  ];
  root.textContent = "";
  for (const [label, value] of rows) {
    const div = root.ownerDocument.createElement("div");
    div.className = "toolbox-row";
    div.textContent = `${label}: ${value}`;
    root.appendChild(div);
  }
}
