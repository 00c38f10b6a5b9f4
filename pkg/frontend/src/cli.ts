// blindcast-plots <kind> --in <csv> [--in <csv> ...] --out <fig.svg>
//                 [--k <n>] [--L <n>]
//
// Reads sweep/layers CSVs produced by the simulator CLI and writes one
// static SVG figure. Pure file-in/file-out; exits 1 on any schema or
// argument problem, writing nothing.

import { readFileSync, renameSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { KINDS, FigureKind, FigureInput, renderFigure } from "./figure.js";
import { SchemaError, parseLayersCsv, parseSweepCsv } from "./csv.js";

class UsageError extends Error {}

interface Args {
  kind: FigureKind;
  inputs: string[];
  out: string;
  k?: number;
  L?: number;
}

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0) {
    throw new UsageError(`usage: blindcast-plots <${KINDS.join("|")}> --in CSV --out SVG`);
  }
  const kind = argv[0]!;
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown figure kind "${kind}" (want ${KINDS.join(", ")})`);
  }
  const inputs: string[] = [];
  let out: string | undefined;
  let k: number | undefined;
  let L: number | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i]!;
    const value = argv[i + 1];
    if (value === undefined) {
      throw new UsageError(`flag ${flag} needs a value`);
    }
    switch (flag) {
      case "--in":
        inputs.push(value);
        break;
      case "--out":
        out = value;
        break;
      case "--k":
        k = parseIntStrict(value, flag);
        break;
      case "--L":
        L = parseIntStrict(value, flag);
        break;
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  if (inputs.length === 0 || out === undefined) {
    throw new UsageError("--in and --out are required");
  }
  if (!out.endsWith(".svg")) {
    throw new UsageError(`output must be an .svg path, got "${out}"`);
  }
  return { kind: kind as FigureKind, inputs, out, k, L };
}

function parseIntStrict(value: string, flag: string): number {
  if (!/^\d+$/.test(value)) {
    throw new UsageError(`${flag} wants a positive integer, got "${value}"`);
  }
  return Number(value);
}

function loadInputs(args: Args): FigureInput {
  const input: FigureInput = { sweeps: [], layers: [], k: args.k, L: args.L };
  for (const path of args.inputs) {
    const text = readFileSync(path, "utf8");
    if (args.kind === "layers") {
      input.layers.push(...parseLayersCsv(text, path));
    } else {
      input.sweeps.push(...parseSweepCsv(text, path));
    }
  }
  return input;
}

export function runCli(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const svg = renderFigure(args.kind, loadInputs(args));
    const tmp = args.out + ".tmp";
    writeFileSync(tmp, svg);
    renameSync(tmp, args.out);
    process.stdout.write(`${args.kind} -> ${args.out}\n`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  process.exit(runCli(process.argv.slice(2)));
}
