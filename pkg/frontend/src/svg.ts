/**
 * Deterministic SVG rendering: same figure model, same bytes.
 *
 * Pixel positions are fixed to two decimals; every marker also carries the
 * untruncated source values as data attributes, so consumers (and tests) can
 * recover exactly what was plotted without reversing the pixel transform.
 */
import { Figure, Series, SeriesPoint } from "./figure.js";

const WIDTH = 800;
const HEIGHT = 440;
const PLOT = { left: 70, right: 590, top: 30, bottom: 385 } as const;
const LEGEND_X = 610;
const SIGMA_PADDING = 0.01;

const px = (v: number): string => v.toFixed(2);

function tickLabel(v: number): string {
  return String(Number(v.toPrecision(6)));
}

interface Scale {
  (v: number): number;
}

function makeScales(figure: Figure): { x: Scale; y: Scale; xTicks: number[]; yTicks: number[] } {
  const points = figure.series.flatMap((s) => s.points);
  const sigmas = [...new Set(points.map((p) => p.sigma))].sort((a, b) => a - b);
  const values = points.map((p) => p.value);

  const x0 = (sigmas[0] as number) - SIGMA_PADDING;
  const x1 = (sigmas[sigmas.length - 1] as number) + SIGMA_PADDING;
  const xSpan = x1 - x0 || 1;
  const x: Scale = (v) => PLOT.left + ((v - x0) / xSpan) * (PLOT.right - PLOT.left);

  let y: Scale;
  let yTicks: number[];
  if (figure.logY) {
    const positive = values.filter((v) => v > 0);
    const lo = Math.floor(Math.log10(Math.min(...positive)));
    const hi = Math.max(Math.ceil(Math.log10(Math.max(...positive))), lo + 1);
    y = (v) => PLOT.bottom - ((Math.log10(v) - lo) / (hi - lo)) * (PLOT.bottom - PLOT.top);
    yTicks = [];
    for (let k = lo; k <= hi; k++) yTicks.push(Math.pow(10, k));
  } else {
    const top = Math.max(...values) * 1.05 || 1;
    y = (v) => PLOT.bottom - (v / top) * (PLOT.bottom - PLOT.top);
    yTicks = [0, top / 4, top / 2, (3 * top) / 4, top];
  }

  const maxXTicks = 8;
  const stride = Math.max(1, Math.ceil(sigmas.length / maxXTicks));
  const xTicks = sigmas.filter((_, i) => i % stride === 0);
  return { x, y, xTicks, yTicks };
}

function marker(s: Series, p: SeriesPoint, cx: number, cy: number): string {
  const data =
    `data-series="${s.label}" data-sigma="${String(p.sigma)}" ` +
    `data-value="${String(p.value)}" data-upper-bound="${p.upperBound}"`;
  if (p.upperBound) {
    const d = `M ${px(cx - 4.5)},${px(cy - 3.5)} L ${px(cx + 4.5)},${px(cy - 3.5)} L ${px(cx)},${px(cy + 4.5)} Z`;
    return `<path class="pt upper" d="${d}" fill="#ffffff" stroke="${s.color}" stroke-width="1.5" ${data}/>`;
  }
  const fill = s.filled ? s.color : "#ffffff";
  return `<circle class="pt" cx="${px(cx)}" cy="${px(cy)}" r="3.5" fill="${fill}" stroke="${s.color}" stroke-width="1.5" ${data}/>`;
}

function yTickText(v: number, logY: boolean): string {
  if (!logY) return String(Number(v.toPrecision(3)));
  const k = Math.round(Math.log10(v));
  return `1e${k}`;
}

export function renderSvg(figure: Figure): string {
  const { x, y, xTicks, yTicks } = makeScales(figure);
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`
  );
  out.push(`<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);

  // axes
  out.push(
    `<line x1="${PLOT.left}" y1="${PLOT.bottom}" x2="${PLOT.right}" y2="${PLOT.bottom}" stroke="#000000"/>`,
    `<line x1="${PLOT.left}" y1="${PLOT.top}" x2="${PLOT.left}" y2="${PLOT.bottom}" stroke="#000000"/>`
  );
  for (const t of xTicks) {
    const cx = x(t);
    out.push(
      `<line x1="${px(cx)}" y1="${PLOT.bottom}" x2="${px(cx)}" y2="${PLOT.bottom + 5}" stroke="#000000"/>`,
      `<text x="${px(cx)}" y="${PLOT.bottom + 18}" text-anchor="middle">${tickLabel(t)}</text>`
    );
  }
  for (const t of yTicks) {
    const cy = y(t);
    out.push(
      `<line x1="${PLOT.left - 5}" y1="${px(cy)}" x2="${PLOT.left}" y2="${px(cy)}" stroke="#000000"/>`,
      `<text x="${PLOT.left - 8}" y="${px(cy + 4)}" text-anchor="end">${yTickText(t, figure.logY)}</text>`
    );
  }
  out.push(
    `<text x="${px((PLOT.left + PLOT.right) / 2)}" y="${HEIGHT - 10}" text-anchor="middle">channel sigma</text>`,
    `<text x="18" y="${px((PLOT.top + PLOT.bottom) / 2)}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${px((PLOT.top + PLOT.bottom) / 2)})">${figure.yLabel}</text>`
  );

  // series: connecting line, then markers on top
  for (const s of figure.series) {
    const coords = s.points.map((p) => `${px(x(p.sigma))},${px(y(p.value))}`);
    const dash = s.dash === null ? "" : ` stroke-dasharray="${s.dash}"`;
    out.push(
      `<polyline class="series-line" data-series="${s.label}" points="${coords.join(" ")}" ` +
        `fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`
    );
    for (const p of s.points) {
      out.push(marker(s, p, x(p.sigma), y(p.value)));
    }
  }

  // legend
  let ly = PLOT.top + 8;
  for (const s of figure.series) {
    const dash = s.dash === null ? "" : ` stroke-dasharray="${s.dash}"`;
    out.push(
      `<line x1="${LEGEND_X}" y1="${ly}" x2="${LEGEND_X + 26}" y2="${ly}" stroke="${s.color}" stroke-width="1.5"${dash}/>`,
      `<circle cx="${LEGEND_X + 13}" cy="${ly}" r="3.5" fill="${s.filled ? s.color : "#ffffff"}" stroke="${s.color}" stroke-width="1.5"/>`,
      `<text x="${LEGEND_X + 32}" y="${ly + 4}">${s.label}</text>`
    );
    ly += 20;
  }
  if (figure.hasUpperBounds) {
    const d = `M ${px(LEGEND_X + 8.5)},${px(ly - 3.5)} L ${px(LEGEND_X + 17.5)},${px(ly - 3.5)} L ${px(LEGEND_X + 13)},${px(ly + 4.5)} Z`;
    out.push(
      `<path d="${d}" fill="#ffffff" stroke="#000000" stroke-width="1.5"/>`,
      `<text x="${LEGEND_X + 32}" y="${ly + 4}">0 failures: 95% upper bound</text>`
    );
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
