// Order statistics for the figure series. Hit-time distributions are
// heavy-tailed, so figures plot medians with an interquartile band.

export function median(values: number[]): number {
  if (values.length === 0) {
    throw new Error("median of empty list");
  }
  return quantile(values, 0.5);
}

/** Linear-interpolation quantile on a sorted copy (q in [0, 1]). */
export function quantile(values: number[], q: number): number {
  if (values.length === 0) {
    throw new Error("quantile of empty list");
  }
  if (q < 0 || q > 1) {
    throw new Error(`quantile fraction ${q} out of range`);
  }
  const sorted = [...values].sort((a, b) => a - b);
  const pos = (sorted.length - 1) * q;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  const a = sorted[lo]!;
  const b = sorted[hi]!;
  return a + (b - a) * (pos - lo);
}

export interface Summary {
  n: number;
  median: number;
  q1: number;
  q3: number;
}

export function summarize(values: number[]): Summary {
  return {
    n: values.length,
    median: median(values),
    q1: quantile(values, 0.25),
    q3: quantile(values, 0.75),
  };
}

/** Group rows by an integer key, preserving ascending key order. */
export function groupBy<T>(rows: T[], key: (row: T) => number): Map<number, T[]> {
  const groups = new Map<number, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(k, [row]);
    }
  }
  return new Map([...groups.entries()].sort((a, b) => a[0] - b[0]));
}
