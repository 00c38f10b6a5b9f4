import assert from "node:assert/strict";
import { test } from "node:test";
import { readFileSync } from "node:fs";
import {
  LAYERS_HEADER,
  SWEEP_HEADER,
  SchemaError,
  parseLayersCsv,
  parseSweepCsv,
} from "../src/csv.js";

const sweepText = readFileSync(new URL("../../testdata/sweep_wakeup.csv", import.meta.url), "utf8");
const layersText = readFileSync(
  new URL("../../testdata/layers_broadcast.csv", import.meta.url),
  "utf8",
);

test("parses the checked-in sweep file", () => {
  const rows = parseSweepCsv(sweepText, "sweep_wakeup.csv");
  assert.equal(rows.length, 100);
  assert.deepEqual([...new Set(rows.map((r) => r.k))], [8, 16, 32, 64]);
  assert.ok(rows.every((r) => r.L === 4096));
  assert.ok(rows.every((r) => r.budget > 0));
});

test("parses the checked-in layers file", () => {
  const rows = parseLayersCsv(layersText, "layers_broadcast.csv");
  assert.equal(rows.length, 16);
  assert.ok(rows.every((r) => r.duration >= 0));
});

test("rejects a wrong header", () => {
  assert.throws(
    () => parseSweepCsv(layersText, "layers.csv"),
    (err: unknown) => err instanceof SchemaError && /expected header/.test(String(err)),
  );
  assert.throws(() => parseLayersCsv(sweepText, "sweep.csv"), SchemaError);
});

test("rejects empty data", () => {
  assert.throws(() => parseSweepCsv(SWEEP_HEADER + "\n", "empty.csv"), /no data rows/);
  assert.throws(() => parseLayersCsv(LAYERS_HEADER + "\n", "empty.csv"), /no data rows/);
});

test("rejects ragged rows and non-integers", () => {
  assert.throws(() => parseSweepCsv(SWEEP_HEADER + "\nwakeup,aa,8\n", "x.csv"), /row 2/);
  const bad = SWEEP_HEADER + "\nwakeup,aa,8,64,12,1,abc,100,1,0\n";
  assert.throws(() => parseSweepCsv(bad, "x.csv"), /not an integer/);
});
