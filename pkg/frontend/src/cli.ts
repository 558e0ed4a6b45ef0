/**
 * Command line: CSV in, SVG figure out.
 *
 *   gkpaqec-plots --kind bitflip --in results.csv --out fig.svg
 *   gkpaqec-plots --kind c4c6 --in sweep.csv --out fig.svg [--basis combined] [--linear-y]
 *
 * Exit codes: 0 success, 1 bad input data or I/O, 2 usage.
 */
import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { CsvSchemaError, parseEstimates } from "./csv.js";
import { buildFigure, EmptySelectionError, FigureKind } from "./figure.js";
import { renderSvg } from "./svg.js";

const USAGE =
  "usage: gkpaqec-plots --kind bitflip|c4c6 --in results.csv --out figure.svg " +
  "[--linear-y] [--basis per_basis|combined]";

function usageError(message: string): 2 {
  process.stderr.write(`error: ${message}\n${USAGE}\n`);
  return 2;
}

export function run(argv: string[]): number {
  let values: {
    kind?: string;
    in?: string;
    out?: string;
    "linear-y"?: boolean;
    basis?: string;
  };
  try {
    values = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        "linear-y": { type: "boolean", default: false },
        basis: { type: "string", default: "per_basis" },
      },
      allowPositionals: false,
    }).values;
  } catch (err) {
    return usageError((err as Error).message);
  }

  const { kind, in: input, out, basis } = values;
  if (kind !== "bitflip" && kind !== "c4c6") {
    return usageError(`--kind must be bitflip or c4c6, got ${kind ?? "<missing>"}`);
  }
  if (!input || !out) {
    return usageError("--in and --out are required");
  }
  if (!out.endsWith(".svg")) {
    return usageError(`--out must be an .svg path, got ${out}`);
  }
  if (basis !== "per_basis" && basis !== "combined") {
    return usageError(`--basis must be per_basis or combined, got ${basis}`);
  }

  try {
    const rows = parseEstimates(readFileSync(input, "utf8"));
    const figure = buildFigure(rows, {
      kind: kind as FigureKind,
      logY: !values["linear-y"],
      basis,
    });
    writeFileSync(out, renderSvg(figure));
    return 0;
  } catch (err) {
    if (
      err instanceof CsvSchemaError ||
      err instanceof EmptySelectionError ||
      (err as NodeJS.ErrnoException).code !== undefined
    ) {
      process.stderr.write(`error: ${(err as Error).message}\n`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(run(process.argv.slice(2)));
}
