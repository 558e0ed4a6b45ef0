/**
 * Reader for the simulator's estimate CSV tables.
 *
 * The column set below is a compatibility contract with the producing CLI;
 * unknown extra columns are ignored, missing or malformed ones are errors.
 */

export interface EstimateRow {
  experiment: string;
  decoder: string;
  code: string;
  level: number;
  basisMode: string;
  sigma: number;
  squeezingDb: number;
  trials: number;
  failures: number;
  pFail: number;
  ciLow: number;
  ciHigh: number;
  /** kept as text: 64-bit seeds do not fit a double */
  seed: string;
}

export class CsvSchemaError extends Error {}

const REQUIRED = [
  "experiment",
  "decoder",
  "code",
  "level",
  "basis_mode",
  "sigma",
  "squeezing_db",
  "trials",
  "failures",
  "p_fail",
  "ci_low",
  "ci_high",
  "seed",
] as const;

function numberField(fields: string[], col: number, line: number, name: string): number {
  const raw = fields[col];
  const value = Number(raw);
  if (raw === undefined || raw === "" || Number.isNaN(value)) {
    throw new CsvSchemaError(`line ${line}: column ${name} is not numeric: ${raw ?? "<missing>"}`);
  }
  return value;
}

export function parseEstimates(text: string): EstimateRow[] {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("empty document");
  }
  const header = (lines[0] as string).split(",");
  const col = new Map<string, number>(header.map((name, i) => [name, i]));
  for (const name of REQUIRED) {
    if (!col.has(name)) {
      throw new CsvSchemaError(`missing required column ${name}`);
    }
  }
  const at = (name: (typeof REQUIRED)[number]): number => col.get(name) as number;

  const rows: EstimateRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = (lines[i] as string).split(",");
    if (fields.length < header.length) {
      throw new CsvSchemaError(`line ${i + 1}: expected ${header.length} fields, got ${fields.length}`);
    }
    rows.push({
      experiment: fields[at("experiment")] as string,
      decoder: fields[at("decoder")] as string,
      code: fields[at("code")] as string,
      level: numberField(fields, at("level"), i + 1, "level"),
      basisMode: fields[at("basis_mode")] as string,
      sigma: numberField(fields, at("sigma"), i + 1, "sigma"),
      squeezingDb: numberField(fields, at("squeezing_db"), i + 1, "squeezing_db"),
      trials: numberField(fields, at("trials"), i + 1, "trials"),
      failures: numberField(fields, at("failures"), i + 1, "failures"),
      pFail: numberField(fields, at("p_fail"), i + 1, "p_fail"),
      ciLow: numberField(fields, at("ci_low"), i + 1, "ci_low"),
      ciHigh: numberField(fields, at("ci_high"), i + 1, "ci_high"),
      seed: fields[at("seed")] as string,
    });
  }
  return rows;
}
