// PNG renderer. Same layout as the SVG, rasterized by hand and encoded
// with pngjs.

import { PNG } from "pngjs";

import { Figure } from "./chart.js";
import { makeLayout } from "./layout.js";
import { parseHex, Raster, textWidth } from "./raster.js";

const GRID = parseHex("#d8d8d8");
const FRAME = parseHex("#222222");
const TEXT = parseHex("#333333");
const TITLE = parseHex("#111111");

export function renderPngRaster(fig: Figure): Raster {
  const lay = makeLayout(fig);
  const img = new Raster(lay.width, lay.height);

  for (const tick of fig.xTicks) {
    const x = lay.mapX(tick.value);
    if (x < lay.x0 - 0.5 || x > lay.x1 + 0.5) continue;
    img.line(x, lay.y0, x, lay.y1, GRID);
    img.text(x - textWidth(tick.label) / 2, lay.y1 + 10, tick.label, TEXT);
  }
  for (const tick of fig.yTicks) {
    const y = lay.mapY(tick.value);
    if (y < lay.y0 - 0.5 || y > lay.y1 + 0.5) continue;
    img.line(lay.x0, y, lay.x1, y, GRID);
    img.text(lay.x0 - 10 - textWidth(tick.label), y - 7, tick.label, TEXT);
  }

  for (const s of fig.series) {
    const color = parseHex(s.color);
    if (s.marker) {
      for (const p of s.points) img.disc(lay.mapX(p.x), lay.mapY(p.y), 4.5, color);
    } else {
      for (let i = 1; i < s.points.length; i++) {
        const a = s.points[i - 1]!;
        const b = s.points[i]!;
        img.line(lay.mapX(a.x), lay.mapY(a.y), lay.mapX(b.x), lay.mapY(b.y), color);
      }
    }
  }

  img.line(lay.x0, lay.y0, lay.x1, lay.y0, FRAME);
  img.line(lay.x0, lay.y1, lay.x1, lay.y1, FRAME);
  img.line(lay.x0, lay.y0, lay.x0, lay.y1, FRAME);
  img.line(lay.x1, lay.y0, lay.x1, lay.y1, FRAME);

  img.text((lay.x0 + lay.x1) / 2 - textWidth(fig.xLabel) / 2, lay.y1 + 34, fig.xLabel, TITLE);
  img.textVertical(12, (lay.y0 + lay.y1) / 2 + textWidth(fig.yLabel) / 2, fig.yLabel, TITLE);

  const legendX = lay.x1 + 16;
  let legendY = lay.y0 + 8;
  for (const s of fig.series) {
    img.fillRect(legendX, legendY + 5, 22, 3, parseHex(s.color));
    img.text(legendX + 28, legendY, s.label, TITLE);
    legendY += 19;
  }

  return img;
}

export function renderPng(fig: Figure): Buffer {
  const raster = renderPngRaster(fig);
  const png = new PNG({ width: raster.width, height: raster.height });
  png.data.set(raster.data);
  return PNG.sync.write(png, { deflateLevel: 9, deflateStrategy: 0 });
}
