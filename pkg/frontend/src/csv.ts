// Readers for the two CSV schemas the simulator CLI emits. Any header or
// field deviation is a hard error so figures never render from the wrong
// file shape.

export const SWEEP_HEADER =
  "mode,key,k,L,r,inst_seed,hit_step,budget,within_budget,wall_ms";
export const LAYERS_HEADER = "layer,size,r,first_leading,duration,budget";

export class SchemaError extends Error {}

export interface SweepRow {
  mode: string;
  key: string;
  k: number;
  L: number;
  r: number;
  hitStep: number; // -1 when the trial never hit
  budget: number;
  withinBudget: boolean;
}

export interface LayerRow {
  layer: number;
  size: number;
  r: number;
  firstLeading: number;
  duration: number;
  budget: number;
}

function splitCsv(text: string, header: string, path: string): string[][] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== header) {
    throw new SchemaError(
      `${path}: expected header "${header}", got "${lines[0] ?? "<empty>"}"`,
    );
  }
  const rows = lines.slice(1).map((line) => line.split(","));
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const width = header.split(",").length;
  for (const [i, row] of rows.entries()) {
    if (row.length !== width) {
      throw new SchemaError(`${path}: row ${i + 2} has ${row.length} fields, want ${width}`);
    }
  }
  return rows;
}

function int(field: string, where: string): number {
  if (!/^-?\d+$/.test(field)) {
    throw new SchemaError(`${where}: not an integer: "${field}"`);
  }
  return Number(field);
}

export function parseSweepCsv(text: string, path: string): SweepRow[] {
  return splitCsv(text, SWEEP_HEADER, path).map((f, i) => {
    const where = `${path}:${i + 2}`;
    return {
      mode: f[0]!,
      key: f[1]!,
      k: int(f[2]!, where),
      L: int(f[3]!, where),
      r: int(f[4]!, where),
      hitStep: int(f[6]!, where),
      budget: int(f[7]!, where),
      withinBudget: int(f[8]!, where) === 1,
    };
  });
}

export function parseLayersCsv(text: string, path: string): LayerRow[] {
  return splitCsv(text, LAYERS_HEADER, path).map((f, i) => {
    const where = `${path}:${i + 2}`;
    return {
      layer: int(f[0]!, where),
      size: int(f[1]!, where),
      r: int(f[2]!, where),
      firstLeading: int(f[3]!, where),
      duration: int(f[4]!, where),
      budget: int(f[5]!, where),
    };
  });
}
