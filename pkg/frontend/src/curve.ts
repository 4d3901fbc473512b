/** Learning-curve rendering: accuracy (or labeled fraction) per query. */

export interface CurvePoint {
  x: number;
  y: number;
}

export function curvePath(
  values: number[],
  width: number,
  height: number,
  pad = 24,
): CurvePoint[] {
  if (values.length === 0) {
    return [];
  }
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const step = values.length > 1 ? innerW / (values.length - 1) : 0;
  return values.map((v, i) => ({
    x: pad + (values.length > 1 ? i * step : innerW / 2),
    y: pad + (1 - Math.max(0, Math.min(1, v))) * innerH,
  }));
}

export function drawCurve(
  canvas: HTMLCanvasElement,
  values: number[],
  label: string,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#bbb";
  ctx.lineWidth = 1;
  ctx.strokeRect(24, 24, width - 48, height - 48);
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  ctx.fillText("1.0", 4, 28);
  ctx.fillText("0.0", 4, height - 22);
  ctx.fillText(label, width / 2 - 30, height - 6);

  const path = curvePath(values, width, height);
  if (path.length === 0) {
    return;
  }
  ctx.strokeStyle = "#2a7de1";
  ctx.lineWidth = 2;
  ctx.beginPath();
  path.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
  ctx.stroke();
  ctx.fillStyle = "#2a7de1";
  for (const p of path) {
    ctx.beginPath();
    ctx.arc(p.x, p.y, 2.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}
