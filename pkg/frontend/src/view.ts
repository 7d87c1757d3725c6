// View state for the dot-plot columns: sorting, pan/zoom, the exploration
// line, and the pending-vs-applied split of preference ranges.

import type { PreferenceRanges, Solution } from "./grouping.js";
import { unbounded } from "./grouping.js";

export interface SortKey {
  objective: number;
  ascending: boolean;
}

export class ViewState {
  sort: SortKey | null = null;
  /** first visible row within the sorted column */
  panOffset = 0;
  /** rows shown at once; Infinity means everything */
  zoomExtent = Infinity;
  /** eval_index under the exploration line, or null */
  explorationIndex: number | null = null;
  /** ranges the sliders currently show */
  pending: PreferenceRanges;
  /** ranges the server last acknowledged */
  applied: PreferenceRanges;

  constructor(k: number) {
    this.pending = unbounded(k);
    this.applied = unbounded(k);
  }

  setSort(objective: number, ascending: boolean): void {
    this.sort = { objective, ascending };
  }

  clearSort(): void {
    this.sort = null;
  }

  pan(offset: number, total: number): void {
    const maxOffset = Math.max(0, total - Math.min(this.zoomExtent, total));
    this.panOffset = Math.min(maxOffset, Math.max(0, offset));
  }

  zoom(extent: number): void {
    this.zoomExtent = extent >= 1 ? extent : 1;
  }

  markApplied(): void {
    this.applied = {
      lower: [...this.pending.lower],
      upper: [...this.pending.upper],
    };
  }

  /** Stable sort by the chosen objective; no key = input order. */
  sorted(solutions: Solution[]): Solution[] {
    if (this.sort === null) return [...solutions];
    const { objective, ascending } = this.sort;
    const sign = ascending ? 1 : -1;
    return solutions
      .map((s, i) => ({ s, i }))
      .sort((a, b) => sign * (a.s.f[objective] - b.s.f[objective]) || a.i - b.i)
      .map((t) => t.s);
  }

  /** Rows inside the current pan/zoom window, in render order. */
  visible(solutions: Solution[]): Solution[] {
    const ordered = this.sorted(solutions);
    if (this.zoomExtent === Infinity && this.panOffset === 0) return ordered;
    return ordered.slice(this.panOffset, this.panOffset + this.zoomExtent);
  }

  /** The solution under the exploration line, with all values to label. */
  explored(solutions: Solution[]): Solution | null {
    if (this.explorationIndex === null) return null;
    return solutions.find((s) => s.eval_index === this.explorationIndex) ?? null;
  }
}
