// Client-side mirror of the server's solution grouping so slider drags
// never need a network round trip. The arithmetic must match the server
// double for double: per-objective violations are summed left to right.

export interface Solution {
  x: number[];
  f: number[];
  eval_index: number;
}

export interface PreferenceRanges {
  lower: number[];
  upper: number[];
}

export interface ViolationReport {
  perObjective: number[];
  violatedCount: number;
  totalMagnitude: number;
}

export interface GroupedView {
  /** groups[c] holds solutions violating exactly c limits, best first */
  groups: Solution[][];
  magnitudes: Map<number, number>;
}

export function unbounded(k: number): PreferenceRanges {
  return {
    lower: new Array(k).fill(-Infinity),
    upper: new Array(k).fill(Infinity),
  };
}

export function violation(f: number[], ranges: PreferenceRanges): ViolationReport {
  if (f.length !== ranges.lower.length) {
    throw new Error(`objective arity mismatch: ${f.length} vs ${ranges.lower.length}`);
  }
  const per: number[] = [];
  let total = 0;
  let count = 0;
  for (let i = 0; i < f.length; i++) {
    let v = 0;
    const below = ranges.lower[i] - f[i];
    if (below > 0) v += below;
    const above = f[i] - ranges.upper[i];
    if (above > 0) v += above;
    per.push(v);
    total += v;
    if (v > 0) count += 1;
  }
  return { perObjective: per, violatedCount: count, totalMagnitude: total };
}

export function groupSolutions(
  solutions: Solution[],
  ranges: PreferenceRanges,
): GroupedView {
  const k = ranges.lower.length;
  const buckets: { mag: number; idx: number; s: Solution }[][] = [];
  for (let c = 0; c <= k; c++) buckets.push([]);
  const magnitudes = new Map<number, number>();
  for (const s of solutions) {
    const rep = violation(s.f, ranges);
    buckets[rep.violatedCount].push({ mag: rep.totalMagnitude, idx: s.eval_index, s });
    magnitudes.set(s.eval_index, rep.totalMagnitude);
  }
  const groups = buckets.map((bucket) =>
    bucket
      .sort((a, b) => (a.mag - b.mag) || (a.idx - b.idx))
      .map((t) => t.s),
  );
  return { groups, magnitudes };
}
