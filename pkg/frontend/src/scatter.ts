/** 2-D pool scatter: MAP-class colors scaled by confidence, query halo. */

export interface PlacedPoint {
  x: number;
  y: number;
}

export const CLASS_PALETTE = [
  [66, 133, 244],
  [219, 68, 55],
  [244, 180, 0],
  [15, 157, 88],
  [171, 71, 188],
  [0, 172, 193],
  [255, 112, 67],
  [158, 157, 36],
];

/** Map raw coordinates into a padded width x height canvas, preserving aspect. */
export function scatterLayout(
  features: number[][],
  width: number,
  height: number,
  pad = 12,
): PlacedPoint[] {
  if (features.length === 0) {
    return [];
  }
  const xs = features.map((f) => f[0] ?? 0);
  const ys = features.map((f) => f[1] ?? 0);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const offX = (width - spanX * scale) / 2;
  const offY = (height - spanY * scale) / 2;
  return features.map((f) => ({
    x: offX + ((f[0] ?? 0) - minX) * scale,
    y: height - (offY + ((f[1] ?? 0) - minY) * scale),
  }));
}

/** Confidence-weighted class color; low confidence fades toward gray. */
export function pointColor(
  mapClass: number,
  confidence: number,
  classCount: number,
): string {
  const [r, g, b] = CLASS_PALETTE[mapClass % CLASS_PALETTE.length];
  const floor = 1 / Math.max(classCount, 2);
  const t = Math.max(0, Math.min(1, (confidence - floor) / (1 - floor)));
  const mix = (c: number) => Math.round(180 + (c - 180) * t);
  return `rgb(${mix(r)}, ${mix(g)}, ${mix(b)})`;
}

export interface ScatterView {
  features: number[][];
  mapClasses: number[];
  confidence: number[];
  classCount: number;
  labeled: Set<number>;
  queryPoint: number | null;
}

export function drawScatter(canvas: HTMLCanvasElement, view: ScatterView): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return; // headless test environment without canvas support
  }
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const placed = scatterLayout(view.features, width, height);
  placed.forEach((p, i) => {
    ctx.beginPath();
    ctx.fillStyle = pointColor(
      view.mapClasses[i] ?? 0,
      view.confidence[i] ?? 0,
      view.classCount,
    );
    ctx.arc(p.x, p.y, view.labeled.has(i) ? 4.5 : 2.5, 0, 2 * Math.PI);
    ctx.fill();
    if (view.labeled.has(i)) {
      ctx.strokeStyle = "#222";
      ctx.lineWidth = 1.5;
      ctx.stroke();
    }
  });
  if (view.queryPoint !== null && placed[view.queryPoint]) {
    const p = placed[view.queryPoint];
    ctx.beginPath();
    ctx.strokeStyle = "#111";
    ctx.lineWidth = 2.5;
    ctx.arc(p.x, p.y, 9, 0, 2 * Math.PI);
    ctx.stroke();
  }
}
