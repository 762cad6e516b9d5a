#!/usr/bin/env node
// render --csv <path> --out <path> --style {exponents|ratio}
//
// Reads a sweep CSV, writes <out>.png and <out>.svg (a .png or .svg
// extension on --out names the base). Exit codes: 0 ok, 1 bad CSV content,
// 2 bad arguments, 3 file I/O.

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { buildFigure, Style } from "./chart.js";
import { parseSweepCsv } from "./csv.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

export interface Io {
  log: (msg: string) => void;
  error: (msg: string) => void;
}

const USAGE = "usage: render --csv <path> --out <path> --style {exponents|ratio}";

export function run(argv: string[], io: Io = { log: console.log, error: console.error }): number {
  const args = argv[0] === "render" ? argv.slice(1) : argv;
  let parsed;
  try {
    parsed = parseArgs({
      args,
      options: {
        csv: { type: "string" },
        out: { type: "string" },
        style: { type: "string" },
      },
      strict: true,
      allowPositionals: false,
    });
  } catch (err) {
    io.error(`error: ${(err as Error).message}`);
    io.error(USAGE);
    return 2;
  }
  const { csv, out, style } = parsed.values;
  if (!csv || !out || !style) {
    io.error("error: --csv, --out, and --style are all required");
    io.error(USAGE);
    return 2;
  }
  if (style !== "exponents" && style !== "ratio") {
    io.error(`error: unknown style ${JSON.stringify(style)}, expected exponents or ratio`);
    return 2;
  }

  let text: string;
  try {
    text = readFileSync(csv, "utf8");
  } catch (err) {
    io.error(`error: cannot read ${csv}: ${(err as NodeJS.ErrnoException).message}`);
    return 3;
  }

  let figure;
  try {
    figure = buildFigure(parseSweepCsv(text), style as Style);
  } catch (err) {
    if (!(err instanceof Error)) throw err;
    io.error(`error: ${err.message}`);
    return 1;
  }

  const base = out.replace(/\.(png|svg)$/i, "");
  const pngPath = `${base}.png`;
  const svgPath = `${base}.svg`;
  try {
    writeFileSync(pngPath, renderPng(figure));
    writeFileSync(svgPath, renderSvg(figure), "utf8");
  } catch (err) {
    io.error(`error: cannot write output: ${(err as NodeJS.ErrnoException).message}`);
    return 3;
  }
  io.log(`wrote ${pngPath} and ${svgPath} (${figure.series.length} series, ${style} style)`);
  return 0;
}

const isDirect =
  typeof process.argv[1] === "string" && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isDirect) {
  process.exit(run(process.argv.slice(2)));
}
