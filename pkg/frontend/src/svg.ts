// Hand-rolled SVG emitter. All coordinates go through px() so repeated runs
// produce byte-identical markup.

import { Figure } from "./chart.js";
import { Layout, makeLayout } from "./layout.js";

const FONT = 'font-family="ui-monospace, Menlo, Consolas, monospace"';

function px(v: number): string {
  return v.toFixed(2).replace(/\.00$/, "");
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function gridAndTicks(fig: Figure, lay: Layout, out: string[]): void {
  for (const tick of fig.xTicks) {
    const x = lay.mapX(tick.value);
    if (x < lay.x0 - 0.5 || x > lay.x1 + 0.5) continue;
    out.push(`<line x1="${px(x)}" y1="${px(lay.y0)}" x2="${px(x)}" y2="${px(lay.y1)}" stroke="#d8d8d8" stroke-width="1"/>`);
    out.push(`<text x="${px(x)}" y="${px(lay.y1 + 20)}" text-anchor="middle" font-size="13" ${FONT} fill="#333">${esc(tick.label)}</text>`);
  }
  for (const tick of fig.yTicks) {
    const y = lay.mapY(tick.value);
    if (y < lay.y0 - 0.5 || y > lay.y1 + 0.5) continue;
    out.push(`<line x1="${px(lay.x0)}" y1="${px(y)}" x2="${px(lay.x1)}" y2="${px(y)}" stroke="#d8d8d8" stroke-width="1"/>`);
    out.push(`<text x="${px(lay.x0 - 8)}" y="${px(y + 4)}" text-anchor="end" font-size="13" ${FONT} fill="#333">${esc(tick.label)}</text>`);
  }
}

export function renderSvg(fig: Figure): string {
  const lay = makeLayout(fig);
  const out: string[] = [];
  out.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${lay.width}" height="${lay.height}" viewBox="0 0 ${lay.width} ${lay.height}">`);
  out.push(`<rect x="0" y="0" width="${lay.width}" height="${lay.height}" fill="#ffffff"/>`);

  gridAndTicks(fig, lay, out);

  for (const s of fig.series) {
    if (s.marker) {
      for (const p of s.points) {
        out.push(`<circle cx="${px(lay.mapX(p.x))}" cy="${px(lay.mapY(p.y))}" r="4.5" fill="${s.color}"/>`);
      }
    } else {
      const coords = s.points.map((p) => `${px(lay.mapX(p.x))},${px(lay.mapY(p.y))}`).join(" ");
      out.push(`<polyline points="${coords}" fill="none" stroke="${s.color}" stroke-width="1.8"/>`);
    }
  }

  out.push(`<rect x="${px(lay.x0)}" y="${px(lay.y0)}" width="${px(lay.x1 - lay.x0)}" height="${px(lay.y1 - lay.y0)}" fill="none" stroke="#222" stroke-width="1.2"/>`);

  out.push(`<text x="${px((lay.x0 + lay.x1) / 2)}" y="${px(lay.y1 + 44)}" text-anchor="middle" font-size="14" ${FONT} fill="#111">${esc(fig.xLabel)}</text>`);
  out.push(`<text x="20" y="${px((lay.y0 + lay.y1) / 2)}" text-anchor="middle" font-size="14" ${FONT} fill="#111" transform="rotate(-90 20 ${px((lay.y0 + lay.y1) / 2)})">${esc(fig.yLabel)}</text>`);

  const legendX = lay.x1 + 16;
  let legendY = lay.y0 + 10;
  for (const s of fig.series) {
    out.push(`<line x1="${px(legendX)}" y1="${px(legendY)}" x2="${px(legendX + 22)}" y2="${px(legendY)}" stroke="${s.color}" stroke-width="3"/>`);
    out.push(`<text x="${px(legendX + 28)}" y="${px(legendY + 4)}" font-size="13" ${FONT} fill="#111">${esc(s.label)}</text>`);
    legendY += 19;
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
