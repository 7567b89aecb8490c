import { describe, expect, it } from "vitest";
import { densityMode, gaussianKde, kdeCurves, silvermanBandwidth } from "../src/kde.js";
import { lcg } from "./helpers.js";

function cloud(center: number, spread: number, n: number, seed: number): number[] {
  const rand = lcg(seed);
  // Sum of three uniforms: roughly bell-shaped, deterministic.
  return Array.from({ length: n }, () => {
    const u = rand() + rand() + rand();
    return center + spread * (u - 1.5);
  });
}

describe("silvermanBandwidth", () => {
  it("rejects fewer than two samples", () => {
    expect(() => silvermanBandwidth([1])).toThrow(/at least 2/);
  });

  it("grows with the spread of the data", () => {
    const narrow = silvermanBandwidth(cloud(100, 5, 200, 1));
    const wide = silvermanBandwidth(cloud(100, 50, 200, 1));
    expect(narrow).toBeGreaterThan(0);
    expect(wide).toBeGreaterThan(narrow);
  });

  it("stays positive when every sample is identical", () => {
    expect(silvermanBandwidth([7, 7, 7, 7])).toBeGreaterThan(0);
  });
});

describe("gaussianKde", () => {
  it("integrates to roughly one", () => {
    const samples = cloud(50, 10, 300, 2);
    const h = silvermanBandwidth(samples);
    const grid = Array.from({ length: 400 }, (_, i) => -50 + i * 0.5);
    const density = gaussianKde(samples, h, grid);
    let area = 0;
    for (let i = 1; i < grid.length; i++) {
      area += ((density[i] + density[i - 1]) / 2) * (grid[i] - grid[i - 1]);
    }
    expect(Math.abs(area - 1)).toBeLessThan(0.02);
  });
});

describe("kdeCurves", () => {
  it("rejects an empty corpus list and undersized samples", () => {
    expect(() => kdeCurves([])).toThrow(/no corpora/);
    expect(() => kdeCurves([{ label: "tiny", samples: [3] }])).toThrow(/"tiny"/);
  });

  it("puts every curve on one shared grid", () => {
    const plot = kdeCurves([
      { label: "a", samples: cloud(100, 10, 100, 3) },
      { label: "b", samples: cloud(180, 10, 100, 4) },
    ]);
    const xsA = plot.curves[0].points.map((p) => p.x);
    const xsB = plot.curves[1].points.map((p) => p.x);
    expect(xsA).toEqual(xsB);
    expect(xsA.length).toBe(200);
  });

  it("produces identical curves for identical corpora", () => {
    const samples = cloud(120, 15, 150, 5);
    const plot = kdeCurves([
      { label: "first", samples: [...samples] },
      { label: "second", samples: [...samples] },
    ]);
    expect(plot.curves[0].points).toEqual(plot.curves[1].points);
    expect(plot.curves[0].bandwidth).toBe(plot.curves[1].bandwidth);
  });

  it("separates the modes of shifted distributions", () => {
    const plot = kdeCurves([
      { label: "low", samples: cloud(100, 12, 200, 6) },
      { label: "high", samples: cloud(200, 12, 200, 7) },
    ]);
    const gap = densityMode(plot.curves[1]) - densityMode(plot.curves[0]);
    expect(gap).toBeGreaterThan(0);
    expect(gap).toBeGreaterThan(50);
  });
});
