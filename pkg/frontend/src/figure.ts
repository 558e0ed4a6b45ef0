/**
 * Figure models: CSV rows grouped into drawable series.
 *
 * bitflip: failure probability vs sigma, one series per decoder.
 * c4c6: same axes, one series per (decoder, level) at a fixed basis mode,
 * line style encoding the level.
 *
 * Cells with zero observed failures cannot sit on a log axis at their point
 * estimate; they are plotted at the 95% upper confidence bound and flagged so
 * the renderer can use a distinct marker instead of dropping them.
 */
import { EstimateRow } from "./csv.js";

export type FigureKind = "bitflip" | "c4c6";

export interface FigureOptions {
  kind: FigureKind;
  logY?: boolean;
  /** c4c6 row filter; "per_basis" or "combined" */
  basis?: string;
}

export interface SeriesPoint {
  sigma: number;
  /** pFail, or ciHigh when the cell saw zero failures */
  value: number;
  upperBound: boolean;
}

export interface Series {
  label: string;
  color: string;
  /** SVG dash pattern; null draws solid */
  dash: string | null;
  /** filled circle markers; open when false */
  filled: boolean;
  points: SeriesPoint[];
}

export interface Figure {
  kind: FigureKind;
  logY: boolean;
  yLabel: string;
  series: Series[];
  hasUpperBounds: boolean;
}

export class EmptySelectionError extends Error {}

const DECODER_COLORS: Record<string, string> = {
  digital: "#1f77b4",
  analog: "#d62728",
};

const LEVEL_DASHES: Record<number, string | null> = {
  1: null,
  2: "6,3",
  3: "2,2",
  4: "8,3,2,3",
  5: "1,2",
};

function toPoint(row: EstimateRow): SeriesPoint {
  const upperBound = row.failures === 0;
  return {
    sigma: row.sigma,
    value: upperBound ? row.ciHigh : row.pFail,
    upperBound,
  };
}

function sortedPoints(rows: EstimateRow[]): SeriesPoint[] {
  return rows
    .slice()
    .sort((a, b) => a.sigma - b.sigma)
    .map(toPoint);
}

function bitflipSeries(rows: EstimateRow[]): Series[] {
  const series: Series[] = [];
  for (const decoder of ["digital", "analog"]) {
    const selected = rows.filter(
      (r) => r.experiment === "bitflip" && r.decoder === decoder
    );
    if (selected.length === 0) continue;
    series.push({
      label: decoder,
      color: DECODER_COLORS[decoder] as string,
      dash: null,
      filled: decoder === "analog",
      points: sortedPoints(selected),
    });
  }
  return series;
}

function c4c6Series(rows: EstimateRow[], basis: string): Series[] {
  const series: Series[] = [];
  for (const decoder of ["digital", "analog"]) {
    const levels = [
      ...new Set(
        rows
          .filter(
            (r) =>
              r.experiment === "c4c6" &&
              r.decoder === decoder &&
              r.basisMode === basis
          )
          .map((r) => r.level)
      ),
    ].sort((a, b) => a - b);
    for (const level of levels) {
      const selected = rows.filter(
        (r) =>
          r.experiment === "c4c6" &&
          r.decoder === decoder &&
          r.basisMode === basis &&
          r.level === level
      );
      series.push({
        label: `${decoder} level ${level}`,
        color: DECODER_COLORS[decoder] as string,
        // level 1 maps to null (solid); ?? would clobber it
        dash: level in LEVEL_DASHES ? (LEVEL_DASHES[level] as string | null) : "4,4",
        filled: decoder === "analog",
        points: sortedPoints(selected),
      });
    }
  }
  return series;
}

export function buildFigure(rows: EstimateRow[], options: FigureOptions): Figure {
  const logY = options.logY ?? true;
  const basis = options.basis ?? "per_basis";
  const series =
    options.kind === "bitflip" ? bitflipSeries(rows) : c4c6Series(rows, basis);
  if (series.length === 0) {
    throw new EmptySelectionError(
      `no ${options.kind} rows selected` +
        (options.kind === "c4c6" ? ` for basis_mode ${basis}` : "")
    );
  }
  return {
    kind: options.kind,
    logY,
    yLabel:
      options.kind === "c4c6" && basis === "per_basis"
        ? "per-basis failure probability"
        : "failure probability",
    series,
    hasUpperBounds: series.some((s) => s.points.some((p) => p.upperBound)),
  };
}
