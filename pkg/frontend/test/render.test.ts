import { describe, expect, it } from "vitest";

import { curvePath } from "../src/curve.js";
import { CLASS_PALETTE, pointColor, scatterLayout } from "../src/scatter.js";
import { treeLayout } from "../src/tree.js";
import type { TreeJson } from "../src/types.js";

describe("scatterLayout", () => {
  it("maps the bounding box into the padded canvas", () => {
    const placed = scatterLayout(
      [
        [0, 0],
        [10, 0],
        [0, 10],
        [10, 10],
      ],
      200,
      100,
      10,
    );
    for (const p of placed) {
      expect(p.x).toBeGreaterThanOrEqual(10);
      expect(p.x).toBeLessThanOrEqual(190);
      expect(p.y).toBeGreaterThanOrEqual(10);
      expect(p.y).toBeLessThanOrEqual(90);
    }
    // aspect ratio preserved: the 10x10 square stays square
    const width = Math.abs(placed[1].x - placed[0].x);
    const height = Math.abs(placed[2].y - placed[0].y);
    expect(width).toBeCloseTo(height, 6);
  });

  it("y axis points upward (larger feature y is higher on canvas)", () => {
    const [low, high] = scatterLayout(
      [
        [0, 0],
        [0, 5],
      ],
      100,
      100,
    );
    expect(high.y).toBeLessThan(low.y);
  });

  it("handles a single point without dividing by zero", () => {
    const placed = scatterLayout([[3, 4]], 100, 100);
    expect(Number.isFinite(placed[0].x)).toBe(true);
    expect(Number.isFinite(placed[0].y)).toBe(true);
  });
});

describe("pointColor", () => {
  it("returns the pure class color at full confidence", () => {
    const [r, g, b] = CLASS_PALETTE[1];
    expect(pointColor(1, 1.0, 4)).toBe(`rgb(${r}, ${g}, ${b})`);
  });

  it("fades to gray at the uniform-confidence floor", () => {
    expect(pointColor(2, 0.25, 4)).toBe("rgb(180, 180, 180)");
  });

  it("cycles the palette for large class ids", () => {
    expect(pointColor(CLASS_PALETTE.length, 1.0, 20)).toBe(pointColor(0, 1.0, 20));
  });
});

describe("curvePath", () => {
  it("spans the padded x range and maps accuracy 1 to the top", () => {
    const path = curvePath([0, 1], 200, 100, 20);
    expect(path).toHaveLength(2);
    expect(path[0]).toEqual({ x: 20, y: 80 });
    expect(path[1]).toEqual({ x: 180, y: 20 });
  });

  it("is empty for an empty curve", () => {
    expect(curvePath([], 100, 100)).toEqual([]);
  });
});

describe("treeLayout", () => {
  const tree: TreeJson = {
    levels: 2,
    root: 3,
    nodes: [
      { id: 0, representative: 0, level: 0, parent: 3, member_count: 1 },
      { id: 1, representative: 1, level: 0, parent: 3, member_count: 1 },
      { id: 2, representative: 2, level: 0, parent: 3, member_count: 1 },
      { id: 3, representative: 0, level: 1, parent: null, children: undefined as never, member_count: 3 },
    ],
  };

  it("puts the root above its children and centers it", () => {
    const { positions, edges } = treeLayout(tree, 300, 200, 10);
    const root = positions.get(3)!;
    for (const leaf of [0, 1, 2]) {
      expect(root.y).toBeLessThan(positions.get(leaf)!.y);
    }
    const xs = [0, 1, 2].map((id) => positions.get(id)!.x);
    expect(root.x).toBeCloseTo((Math.min(...xs) + Math.max(...xs)) / 2, 6);
    expect(edges).toEqual([
      [3, 0],
      [3, 1],
      [3, 2],
    ]);
  });
});
