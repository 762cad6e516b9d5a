// Style-specific figure construction. Everything here works in data space;
// svg.ts and raster.ts share the result so both outputs show the same chart.

import { SweepRow, SweepTable } from "./csv.js";

export type Style = "exponents" | "ratio";

export interface Tick {
  value: number;
  label: string;
}

export interface Series {
  label: string;
  color: string;
  /** Single-point series render as a marker instead of a line. */
  marker: boolean;
  points: Array<{ x: number; y: number }>;
}

export interface Figure {
  xLabel: string;
  yLabel: string;
  xScale: "log";
  yScale: "linear" | "log";
  xDomain: [number, number];
  yDomain: [number, number];
  xTicks: Tick[];
  yTicks: Tick[];
  series: Series[];
}

const METHODS = [
  { key: "quantum", base: "#14438f" },
  { key: "photon", base: "#0f7a3d" },
  { key: "heterodyne", base: "#b03a10" },
  { key: "homodyne", base: "#6d3ba6" },
] as const;

const RATIO_COLORS = ["#14438f", "#b03a10", "#0f7a3d", "#6d3ba6", "#8a6d00", "#0f6f7a"];

function mixTowardWhite(hex: string, t: number): string {
  const n = parseInt(hex.slice(1), 16);
  const ch = (shift: number) => {
    const c = (n >> shift) & 0xff;
    return Math.round(c + (255 - c) * t);
  };
  const out = (ch(16) << 16) | (ch(8) << 8) | ch(0);
  return `#${out.toString(16).padStart(6, "0")}`;
}

export function formatTickValue(v: number): string {
  if (v === 0) return "0";
  const exp = Math.log10(Math.abs(v));
  const rounded = Math.round(exp);
  if (Math.abs(exp - rounded) < 1e-9) {
    if (rounded >= -3 && rounded <= 4) {
      return rounded >= 0 ? String(v) : v.toFixed(-rounded);
    }
    return `1e${rounded}`;
  }
  let s = v.toPrecision(3);
  if (s.includes(".") && !s.includes("e")) s = s.replace(/\.?0+$/, "");
  return s;
}

function logTicks(lo: number, hi: number): Tick[] {
  const ticks: Tick[] = [];
  for (let d = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, d) <= hi * (1 + 1e-9); d++) {
    const value = Math.pow(10, d);
    ticks.push({ value, label: formatTickValue(value) });
  }
  if (ticks.length >= 2) return ticks;
  // Degenerate span, fall back to three geometric ticks.
  const mid = Math.sqrt(lo * hi);
  return [lo, mid, hi].map((value) => ({ value, label: formatTickValue(value) }));
}

function linearTicks(lo: number, hi: number): Tick[] {
  const span = hi - lo;
  const rawStep = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const ticks: Tick[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    const snapped = Math.abs(v) < step * 1e-9 ? 0 : v;
    ticks.push({ value: snapped, label: formatTickValue(snapped) });
  }
  return ticks;
}

function logDomain(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo /= 2;
    hi *= 2;
  }
  return [lo, hi];
}

function groupByK(table: SweepTable): Map<number, SweepRow[]> {
  const groups = new Map<number, SweepRow[]>();
  for (const row of table.rows) {
    const bucket = groups.get(row.k);
    if (bucket) bucket.push(row);
    else groups.set(row.k, [row]);
  }
  return groups;
}

export function buildFigure(table: SweepTable, style: Style): Figure {
  const groups = groupByK(table);
  const kSorted = [...table.kValues].sort((a, b) => a - b);
  const xDomain = logDomain(table.rows.map((r) => r.e));
  const xTicks = logTicks(xDomain[0], xDomain[1]);

  if (style === "exponents") {
    const series: Series[] = [];
    for (const [ki, k] of kSorted.entries()) {
      const rows = groups.get(k)!;
      const shade = kSorted.length === 1 ? 0 : (0.55 * ki) / (kSorted.length - 1);
      for (const method of METHODS) {
        series.push({
          label: `${method.key} K=${k}`,
          color: mixTowardWhite(method.base, shade),
          marker: rows.length === 1,
          points: rows.map((r) => ({ x: r.e, y: r[method.key] })),
        });
      }
    }
    const ys = series.flatMap((s) => s.points.map((p) => p.y));
    const top = Math.max(...ys);
    const yDomain: [number, number] = [Math.min(0, ...ys), top === 0 ? 1 : top * 1.05];
    return {
      xLabel: "E (mean photons per detector)",
      yLabel: "exponent (bits per record)",
      xScale: "log",
      yScale: "linear",
      xDomain,
      yDomain,
      xTicks,
      yTicks: linearTicks(yDomain[0], yDomain[1]),
      series,
    };
  }

  const series: Series[] = [];
  for (const [ki, k] of kSorted.entries()) {
    const rows = groups.get(k)!.filter((r) => Number.isFinite(r.ratioQHet));
    if (rows.length === 0) continue;
    series.push({
      label: `K=${k}`,
      color: RATIO_COLORS[ki % RATIO_COLORS.length]!,
      marker: rows.length === 1,
      points: rows.map((r) => ({ x: r.e, y: r.ratioQHet })),
    });
  }
  if (series.length === 0) {
    throw new Error("ratio style: every ratio_q_het value is non-finite, nothing to plot");
  }
  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  const positive = ys.filter((y) => y > 0);
  if (positive.length === 0) {
    throw new Error("ratio style: no positive ratio values, log axis impossible");
  }
  const yDomain = logDomain(positive);
  yDomain[0] /= 1.15;
  yDomain[1] *= 1.15;
  return {
    xLabel: "E (mean photons per detector)",
    yLabel: "quantum / heterodyne exponent ratio",
    xScale: "log",
    yScale: "log",
    xDomain,
    yDomain,
    xTicks,
    yTicks: logTicks(yDomain[0], yDomain[1]),
    series,
  };
}
