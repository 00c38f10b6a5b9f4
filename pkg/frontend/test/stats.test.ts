import assert from "node:assert/strict";
import { test } from "node:test";
import { groupBy, median, quantile, summarize } from "../src/stats.js";

test("median odd and even lengths", () => {
  assert.equal(median([5]), 5);
  assert.equal(median([3, 1, 2]), 2);
  assert.equal(median([4, 1, 3, 2]), 2.5);
});

test("median does not mutate its input", () => {
  const values = [9, 1, 5];
  median(values);
  assert.deepEqual(values, [9, 1, 5]);
});

test("quantile interpolates linearly", () => {
  assert.equal(quantile([0, 10], 0.25), 2.5);
  assert.equal(quantile([1, 2, 3, 4], 0.25), 1.75);
  assert.equal(quantile([7, 7, 7], 0.75), 7);
});

test("quantile rejects empty and out-of-range", () => {
  assert.throws(() => median([]));
  assert.throws(() => quantile([1], 1.5));
});

test("summarize is order independent", () => {
  const a = summarize([8, 2, 5, 1]);
  const b = summarize([1, 2, 5, 8]);
  assert.deepEqual(a, b);
  assert.equal(a.n, 4);
  assert.ok(a.q1 <= a.median && a.median <= a.q3);
});

test("groupBy sorts keys ascending", () => {
  const groups = groupBy([{ k: 8 }, { k: 2 }, { k: 8 }], (r) => r.k);
  assert.deepEqual([...groups.keys()], [2, 8]);
  assert.equal(groups.get(8)!.length, 2);
});
