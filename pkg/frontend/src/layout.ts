// Pixel geometry shared by the SVG and PNG renderers so both outputs draw
// the same chart from the same Figure.

import { Figure } from "./chart.js";

export const WIDTH = 960;
export const HEIGHT = 600;
export const MARGIN = { left: 82, right: 238, top: 22, bottom: 58 };

export interface Layout {
  width: number;
  height: number;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
  mapX: (v: number) => number;
  mapY: (v: number) => number;
}

export function makeLayout(fig: Figure): Layout {
  const x0 = MARGIN.left;
  const y0 = MARGIN.top;
  const x1 = WIDTH - MARGIN.right;
  const y1 = HEIGHT - MARGIN.bottom;

  const lx0 = Math.log10(fig.xDomain[0]);
  const lx1 = Math.log10(fig.xDomain[1]);
  const mapX = (v: number) => x0 + ((Math.log10(v) - lx0) / (lx1 - lx0)) * (x1 - x0);

  let mapY: (v: number) => number;
  if (fig.yScale === "log") {
    const ly0 = Math.log10(fig.yDomain[0]);
    const ly1 = Math.log10(fig.yDomain[1]);
    mapY = (v) => y1 - ((Math.log10(v) - ly0) / (ly1 - ly0)) * (y1 - y0);
  } else {
    const [d0, d1] = fig.yDomain;
    mapY = (v) => y1 - ((v - d0) / (d1 - d0)) * (y1 - y0);
  }
  return { width: WIDTH, height: HEIGHT, x0, y0, x1, y1, mapX, mapY };
}
