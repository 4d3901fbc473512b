/** Cluster-tree view with subquery markers from the latest selection trace. */

import type { TraceJson, TreeJson } from "./types.js";

export interface TreePlacement {
  positions: Map<number, { x: number; y: number }>;
  edges: [number, number][];
}

/** Root on top; children packed under their parent by leaf order. */
export function treeLayout(
  tree: TreeJson,
  width: number,
  height: number,
  pad = 16,
): TreePlacement {
  const children = new Map<number, number[]>();
  for (const node of tree.nodes) {
    children.set(node.id, []);
  }
  for (const node of tree.nodes) {
    if (node.parent !== null) {
      children.get(node.parent)?.push(node.id);
    }
  }
  // in-order leaf positions, then parents centered over their children
  const xUnit = new Map<number, number>();
  let nextLeafSlot = 0;
  const place = (id: number): number => {
    const kids = children.get(id) ?? [];
    if (kids.length === 0) {
      xUnit.set(id, nextLeafSlot);
      return nextLeafSlot++;
    }
    const slots = kids.map(place);
    const centre = (slots[0] + slots[slots.length - 1]) / 2;
    xUnit.set(id, centre);
    return centre;
  };
  place(tree.root);

  const maxSlot = Math.max(1, nextLeafSlot - 1);
  const maxLevel = Math.max(1, tree.levels - 1);
  const positions = new Map<number, { x: number; y: number }>();
  for (const node of tree.nodes) {
    positions.set(node.id, {
      x: pad + ((xUnit.get(node.id) ?? 0) / maxSlot) * (width - 2 * pad),
      y: pad + ((maxLevel - node.level) / maxLevel) * (height - 2 * pad),
    });
  }
  const edges: [number, number][] = tree.nodes
    .filter((n) => n.parent !== null)
    .map((n) => [n.parent as number, n.id]);
  return { positions, edges };
}

export interface TreeView {
  tree: TreeJson;
  trace: TraceJson | null;
  labeledPoints: Set<number>;
  queryPoint: number | null;
}

export function drawTree(canvas: HTMLCanvasElement, view: TreeView): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const { positions, edges } = treeLayout(view.tree, width, height);

  ctx.strokeStyle = "#ccc";
  ctx.lineWidth = 1;
  for (const [a, b] of edges) {
    const pa = positions.get(a);
    const pb = positions.get(b);
    if (!pa || !pb) continue;
    ctx.beginPath();
    ctx.moveTo(pa.x, pa.y);
    ctx.lineTo(pb.x, pb.y);
    ctx.stroke();
  }

  const evaluated = new Set((view.trace?.evaluated ?? []).map(([p]) => p));
  for (const node of view.tree.nodes) {
    const p = positions.get(node.id);
    if (!p) continue;
    const isQuery = node.representative === view.queryPoint;
    const isEvaluated = evaluated.has(node.representative);
    const isLabeled = view.labeledPoints.has(node.representative);
    ctx.beginPath();
    ctx.fillStyle = isLabeled ? "#222" : isEvaluated ? "#ff8f00" : "#9e9e9e";
    ctx.arc(p.x, p.y, node.level > 0 ? 4 : 2, 0, 2 * Math.PI);
    ctx.fill();
    if (isQuery) {
      ctx.beginPath();
      ctx.strokeStyle = "#d81b60";
      ctx.lineWidth = 2;
      ctx.arc(p.x, p.y, 7, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }
}
