import assert from "node:assert/strict";
import { test } from "node:test";
import { mkdtempSync, readFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { join } from "node:path";
import { runCli } from "../src/cli.js";

const data = (name: string) =>
  fileURLToPath(new URL(`../../testdata/${name}`, import.meta.url));
const work = mkdtempSync(join(tmpdir(), "plots-"));

test("renders all four kinds from the checked-in CSVs", () => {
  const jobs: Array<[string, string[]]> = [
    ["hit-vs-k", ["--in", data("sweep_wakeup.csv")]],
    ["hit-vs-L", ["--in", data("sweep_vs_L.csv")]],
    ["baseline", ["--in", data("sweep_wakeup.csv"), "--in", data("sweep_prime.csv")]],
    ["layers", ["--in", data("layers_broadcast.csv")]],
  ];
  for (const [kind, flags] of jobs) {
    const out = join(work, `${kind}.svg`);
    assert.equal(runCli([kind, ...flags, "--out", out]), 0, kind);
    const svg = readFileSync(out, "utf8");
    assert.ok(svg.startsWith("<svg "), kind);
  }
});

test("rerun produces identical bytes", () => {
  const out1 = join(work, "a.svg");
  const out2 = join(work, "b.svg");
  for (const out of [out1, out2]) {
    assert.equal(runCli(["hit-vs-k", "--in", data("sweep_wakeup.csv"), "--out", out]), 0);
  }
  assert.deepEqual(readFileSync(out1), readFileSync(out2));
});

test("schema mismatch exits 1 and writes nothing", () => {
  const out = join(work, "bad.svg");
  const code = runCli(["hit-vs-k", "--in", data("layers_broadcast.csv"), "--out", out]);
  assert.equal(code, 1);
  assert.ok(!existsSync(out));
});

test("usage errors exit 1", () => {
  assert.equal(runCli([]), 1);
  assert.equal(runCli(["pie", "--in", data("sweep_wakeup.csv"), "--out", join(work, "x.svg")]), 1);
  assert.equal(runCli(["hit-vs-k", "--in", data("sweep_wakeup.csv")]), 1);
  assert.equal(
    runCli(["hit-vs-k", "--in", data("sweep_wakeup.csv"), "--out", join(work, "x.png")]),
    1,
  );
  assert.equal(runCli(["hit-vs-k", "--in", join(work, "missing.csv"), "--out", join(work, "x.svg")]), 1);
});
