import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { run } from "../src/cli.js";

const bitflipCsv = fileURLToPath(new URL("./fixtures/bitflip.csv", import.meta.url));
const c4c6Csv = fileURLToPath(new URL("./fixtures/c4c6.csv", import.meta.url));

let dir: string;
let stderr: string[];

beforeEach(() => {
  dir = mkdtempSync(join(tmpdir(), "plots-"));
  stderr = [];
  vi.spyOn(process.stderr, "write").mockImplementation((chunk) => {
    stderr.push(String(chunk));
    return true;
  });
});

afterEach(() => {
  vi.restoreAllMocks();
  rmSync(dir, { recursive: true, force: true });
});

describe("cli run", () => {
  it("renders a bitflip figure", () => {
    const out = join(dir, "fig2.svg");
    expect(run(["--kind", "bitflip", "--in", bitflipCsv, "--out", out])).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.match(/<polyline class="series-line"/g)).toHaveLength(2);
  });

  it("renders a c4c6 figure with basis and scale flags", () => {
    const out = join(dir, "fig3.svg");
    const rc = run([
      "--kind", "c4c6", "--in", c4c6Csv, "--out", out,
      "--basis", "combined", "--linear-y",
    ]);
    expect(rc).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("series-line");
  });

  it("writes identical bytes on repeated runs", () => {
    const a = join(dir, "a.svg");
    const b = join(dir, "b.svg");
    expect(run(["--kind", "c4c6", "--in", c4c6Csv, "--out", a])).toBe(0);
    expect(run(["--kind", "c4c6", "--in", c4c6Csv, "--out", b])).toBe(0);
    expect(readFileSync(a, "utf8")).toBe(readFileSync(b, "utf8"));
  });

  it.each([
    [["--in", bitflipCsv, "--out", "x.svg"]],
    [["--kind", "surface", "--in", bitflipCsv, "--out", "x.svg"]],
    [["--kind", "bitflip", "--out", "x.svg"]],
    [["--kind", "bitflip", "--in", bitflipCsv]],
    [["--kind", "bitflip", "--in", bitflipCsv, "--out", "x.png"]],
    [["--kind", "c4c6", "--in", c4c6Csv, "--out", "x.svg", "--basis", "odd"]],
    [["--kind", "bitflip", "--in", bitflipCsv, "--out", "x.svg", "--mystery"]],
  ])("usage errors exit 2: %j", (argv) => {
    expect(run(argv as string[])).toBe(2);
    expect(stderr.join("")).toContain("usage:");
  });

  it("schema mismatch exits 1 with a message", () => {
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "a,b,c\n1,2,3\n");
    expect(run(["--kind", "bitflip", "--in", bad, "--out", join(dir, "x.svg")])).toBe(1);
    expect(stderr.join("")).toContain("missing required column");
  });

  it("empty selection exits 1", () => {
    expect(
      run(["--kind", "c4c6", "--in", bitflipCsv, "--out", join(dir, "x.svg")])
    ).toBe(1);
    expect(stderr.join("")).toContain("no c4c6 rows");
  });

  it("missing input file exits 1", () => {
    expect(
      run(["--kind", "bitflip", "--in", join(dir, "nope.csv"), "--out", join(dir, "x.svg")])
    ).toBe(1);
    expect(stderr.join("")).toContain("ENOENT");
  });
});
