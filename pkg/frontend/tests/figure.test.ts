import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseEstimates } from "../src/csv.js";
import { buildFigure, EmptySelectionError } from "../src/figure.js";

const bitflip = parseEstimates(
  readFileSync(new URL("./fixtures/bitflip.csv", import.meta.url), "utf8")
);
const c4c6 = parseEstimates(
  readFileSync(new URL("./fixtures/c4c6.csv", import.meta.url), "utf8")
);

describe("buildFigure bitflip", () => {
  const fig = buildFigure(bitflip, { kind: "bitflip" });

  it("produces one series per decoder with all sigma points", () => {
    expect(fig.series.map((s) => s.label)).toEqual(["digital", "analog"]);
    for (const s of fig.series) {
      expect(s.points).toHaveLength(5);
      const sigmas = s.points.map((p) => p.sigma);
      expect(sigmas).toEqual([...sigmas].sort((a, b) => a - b));
    }
  });

  it("styles decoders as open blue vs filled red", () => {
    const [digital, analog] = fig.series;
    expect(digital!.filled).toBe(false);
    expect(analog!.filled).toBe(true);
    expect(digital!.color).not.toBe(analog!.color);
  });

  it("moves zero-failure cells to the upper confidence bound", () => {
    const zeros = bitflip.filter((r) => r.failures === 0);
    expect(zeros.length).toBeGreaterThan(0);
    for (const row of zeros) {
      const series = fig.series.find((s) => s.label === row.decoder)!;
      const point = series.points.find((p) => p.sigma === row.sigma)!;
      expect(point.upperBound).toBe(true);
      expect(point.value).toBe(row.ciHigh);
    }
    expect(fig.hasUpperBounds).toBe(true);
  });

  it("keeps nonzero cells at their point estimate", () => {
    for (const row of bitflip.filter((r) => r.failures > 0)) {
      const series = fig.series.find((s) => s.label === row.decoder)!;
      const point = series.points.find((p) => p.sigma === row.sigma)!;
      expect(point.upperBound).toBe(false);
      expect(point.value).toBe(row.pFail);
    }
  });
});

describe("buildFigure c4c6", () => {
  it("produces one series per decoder and level at the basis filter", () => {
    const fig = buildFigure(c4c6, { kind: "c4c6" });
    expect(fig.series).toHaveLength(6);
    expect(fig.series.map((s) => s.points.length)).toEqual([3, 3, 3, 3, 3, 3]);
    const labels = fig.series.map((s) => s.label);
    expect(labels).toEqual([
      "digital level 1",
      "digital level 2",
      "digital level 3",
      "analog level 1",
      "analog level 2",
      "analog level 3",
    ]);
  });

  it("encodes level as the dash pattern", () => {
    const fig = buildFigure(c4c6, { kind: "c4c6" });
    const dashes = fig.series.slice(0, 3).map((s) => s.dash);
    expect(dashes[0]).toBeNull();
    expect(dashes[1]).not.toBeNull();
    expect(new Set(dashes).size).toBe(3);
  });

  it("selects the requested basis mode", () => {
    const fig = buildFigure(c4c6, { kind: "c4c6", basis: "combined" });
    const combinedRows = c4c6.filter((r) => r.basisMode === "combined");
    const plotted = fig.series.reduce((n, s) => n + s.points.length, 0);
    expect(plotted).toBe(combinedRows.length);
  });

  it("rejects empty selections", () => {
    expect(() => buildFigure(bitflip, { kind: "c4c6" })).toThrow(EmptySelectionError);
    expect(() => buildFigure(c4c6, { kind: "bitflip" })).toThrow(EmptySelectionError);
    expect(() => buildFigure(c4c6, { kind: "c4c6", basis: "weird" })).toThrow(
      EmptySelectionError
    );
  });

  it("defaults to log y and allows linear", () => {
    expect(buildFigure(c4c6, { kind: "c4c6" }).logY).toBe(true);
    expect(buildFigure(c4c6, { kind: "c4c6", logY: false }).logY).toBe(false);
  });
});
