// Dynamic-query slider state, one two-handled slider per objective.
// Sliders admit no illegal state: every edit is clamped, so there is
// nothing to reject and no error path.

import type { PreferenceRanges, Solution } from "./grouping.js";

export class SliderState {
  axisMin: number;
  axisMax: number;
  lower: number;
  upper: number;

  constructor(axisMin: number, axisMax: number) {
    if (!(axisMin <= axisMax)) {
      throw new Error(`bad axis extent [${axisMin}, ${axisMax}]`);
    }
    this.axisMin = axisMin;
    this.axisMax = axisMax;
    this.lower = axisMin;
    this.upper = axisMax;
  }

  private clamp(v: number): number {
    return Math.min(this.axisMax, Math.max(this.axisMin, v));
  }

  /** Drag or type the lower handle; pushes the upper handle along. */
  setLower(v: number): void {
    this.lower = this.clamp(v);
    if (this.upper < this.lower) this.upper = this.lower;
  }

  /** Drag or type the upper handle; pushes the lower handle along. */
  setUpper(v: number): void {
    this.upper = this.clamp(v);
    if (this.lower > this.upper) this.lower = this.upper;
  }

  /** Widen the axis so every observed value stays on the slider bar.
   *  Handles parked at the old extremes follow the growing axis. */
  extendAxis(values: Iterable<number>): void {
    const lowerParked = this.lower === this.axisMin;
    const upperParked = this.upper === this.axisMax;
    for (const v of values) {
      if (v < this.axisMin) this.axisMin = v;
      if (v > this.axisMax) this.axisMax = v;
    }
    if (lowerParked) this.lower = this.axisMin;
    if (upperParked) this.upper = this.axisMax;
  }

  atFullExtent(): boolean {
    return this.lower === this.axisMin && this.upper === this.axisMax;
  }
}

/** Build one slider per objective spanning the data extent. */
export function slidersFromData(solutions: Solution[], k: number): SliderState[] {
  const sliders: SliderState[] = [];
  for (let i = 0; i < k; i++) {
    let lo = Infinity;
    let hi = -Infinity;
    for (const s of solutions) {
      if (s.f[i] < lo) lo = s.f[i];
      if (s.f[i] > hi) hi = s.f[i];
    }
    if (lo > hi) {
      lo = 0;
      hi = 1;
    }
    sliders.push(new SliderState(lo, hi));
  }
  return sliders;
}

/** Grow every axis to cover newly arrived solutions. */
export function extendSliders(sliders: SliderState[], solutions: Solution[]): void {
  sliders.forEach((slider, i) => {
    slider.extendAxis(solutions.map((s) => s.f[i]));
  });
}

/**
 * Translate slider handles into preference ranges. A handle parked at the
 * axis extreme means "no limit on this side" and maps to +-Infinity.
 */
export function slidersToRanges(sliders: SliderState[]): PreferenceRanges {
  return {
    lower: sliders.map((s) => (s.lower === s.axisMin ? -Infinity : s.lower)),
    upper: sliders.map((s) => (s.upper === s.axisMax ? Infinity : s.upper)),
  };
}
