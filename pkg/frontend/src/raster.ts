// Minimal RGBA raster with anti-aliased lines (Xiaolin Wu), filled discs,
// and 5x7 bitmap text. Backs the PNG output.

import { GLYPH_H, GLYPH_W, glyphRows } from "./font.js";

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

export function parseHex(hex: string): Rgb {
  const n = parseInt(hex.slice(1), 16);
  return { r: (n >> 16) & 0xff, g: (n >> 8) & 0xff, b: n & 0xff };
}

export class Raster {
  readonly data: Uint8Array;

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.data = new Uint8Array(width * height * 4);
    this.data.fill(255);
  }

  blend(x: number, y: number, color: Rgb, alpha: number): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height || alpha <= 0) return;
    const a = Math.min(1, alpha);
    const i = (y * this.width + x) * 4;
    this.data[i] = Math.round(this.data[i]! * (1 - a) + color.r * a);
    this.data[i + 1] = Math.round(this.data[i + 1]! * (1 - a) + color.g * a);
    this.data[i + 2] = Math.round(this.data[i + 2]! * (1 - a) + color.b * a);
    this.data[i + 3] = 255;
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    for (let y = Math.round(y0); y < Math.round(y0 + h); y++) {
      for (let x = Math.round(x0); x < Math.round(x0 + w); x++) {
        this.blend(x, y, color, 1);
      }
    }
  }

  disc(cx: number, cy: number, radius: number, color: Rgb): void {
    const r2 = (radius + 0.5) ** 2;
    for (let y = Math.floor(cy - radius - 1); y <= Math.ceil(cy + radius + 1); y++) {
      for (let x = Math.floor(cx - radius - 1); x <= Math.ceil(cx + radius + 1); x++) {
        const d2 = (x - cx) ** 2 + (y - cy) ** 2;
        if (d2 <= r2) {
          const edge = r2 - d2;
          this.blend(x, y, color, Math.min(1, edge / radius));
        }
      }
    }
  }

  /** Anti-aliased line, drawn twice with a half-pixel offset for weight. */
  line(x0: number, y0: number, x1: number, y1: number, color: Rgb): void {
    this.wuLine(x0, y0, x1, y1, color);
    if (Math.abs(y1 - y0) >= Math.abs(x1 - x0)) {
      this.wuLine(x0 + 0.6, y0, x1 + 0.6, y1, color);
    } else {
      this.wuLine(x0, y0 + 0.6, x1, y1 + 0.6, color);
    }
  }

  private wuLine(x0: number, y0: number, x1: number, y1: number, color: Rgb): void {
    const steep = Math.abs(y1 - y0) > Math.abs(x1 - x0);
    if (steep) {
      [x0, y0] = [y0, x0];
      [x1, y1] = [y1, x1];
    }
    if (x0 > x1) {
      [x0, x1] = [x1, x0];
      [y0, y1] = [y1, y0];
    }
    const dx = x1 - x0;
    const gradient = dx === 0 ? 1 : (y1 - y0) / dx;
    const plot = (x: number, y: number, a: number) => {
      if (steep) this.blend(y, x, color, a);
      else this.blend(x, y, color, a);
    };
    let xEnd = Math.round(x0);
    let yEnd = y0 + gradient * (xEnd - x0);
    let gap = 1 - (x0 + 0.5 - Math.floor(x0 + 0.5));
    const xPix0 = xEnd;
    plot(xPix0, Math.floor(yEnd), (1 - (yEnd - Math.floor(yEnd))) * gap);
    plot(xPix0, Math.floor(yEnd) + 1, (yEnd - Math.floor(yEnd)) * gap);
    let intery = yEnd + gradient;

    xEnd = Math.round(x1);
    yEnd = y1 + gradient * (xEnd - x1);
    gap = x1 + 0.5 - Math.floor(x1 + 0.5);
    const xPix1 = xEnd;
    plot(xPix1, Math.floor(yEnd), (1 - (yEnd - Math.floor(yEnd))) * gap);
    plot(xPix1, Math.floor(yEnd) + 1, (yEnd - Math.floor(yEnd)) * gap);

    for (let x = xPix0 + 1; x < xPix1; x++) {
      const fy = Math.floor(intery);
      plot(x, fy, 1 - (intery - fy));
      plot(x, fy + 1, intery - fy);
      intery += gradient;
    }
  }

  /** Top-left anchored bitmap text at integer scale. */
  text(x: number, y: number, content: string, color: Rgb, scale = 2): void {
    let penX = Math.round(x);
    const penY = Math.round(y);
    for (const ch of content) {
      const rows = glyphRows(ch);
      for (let ry = 0; ry < GLYPH_H; ry++) {
        const bits = rows[ry]!;
        for (let rx = 0; rx < GLYPH_W; rx++) {
          if (bits & (1 << rx)) {
            this.fillRect(penX + rx * scale, penY + ry * scale, scale, scale, color);
          }
        }
      }
      penX += (GLYPH_W + 1) * scale;
    }
  }

  /** Text rotated 90 degrees counterclockwise, anchored at its top-left. */
  textVertical(x: number, y: number, content: string, color: Rgb, scale = 2): void {
    let penY = Math.round(y);
    const penX = Math.round(x);
    for (const ch of content) {
      const rows = glyphRows(ch);
      for (let ry = 0; ry < GLYPH_H; ry++) {
        const bits = rows[ry]!;
        for (let rx = 0; rx < GLYPH_W; rx++) {
          if (bits & (1 << rx)) {
            this.fillRect(penX + ry * scale, penY - rx * scale, scale, scale, color);
          }
        }
      }
      penY -= (GLYPH_W + 1) * scale;
    }
  }
}

export function textWidth(content: string, scale = 2): number {
  return content.length * (GLYPH_W + 1) * scale - scale;
}
