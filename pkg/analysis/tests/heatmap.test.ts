import { describe, expect, it } from "vitest";
import { jointDistribution } from "../src/heatmap.js";
import { entry, loadFixtureStats, makeReport } from "./helpers.js";

describe("jointDistribution", () => {
  it("rebuilds exactly the cells the export computed itself", () => {
    const report = loadFixtureStats();
    const dist = jointDistribution(report);
    expect(dist.cells).toEqual(report.joint_histogram);
  });

  it("has marginals that each sum to the document count", () => {
    const report = loadFixtureStats();
    const dist = jointDistribution(report);
    const tokenSum = dist.token_marginal.reduce((a, b) => a + b.docs, 0);
    const imageSum = dist.image_marginal.reduce((a, b) => a + b.docs, 0);
    expect(tokenSum).toBe(report.doc_count);
    expect(imageSum).toBe(report.doc_count);
  });

  it("collapses a uniform corpus into a single occupied cell", () => {
    const report = makeReport([entry(120, 2), entry(130, 2), entry(149, 2)], 50);
    const dist = jointDistribution(report);
    expect(dist.cells).toEqual([{ tokens_bin: 100, images: 2, count: 3 }]);
    expect(dist.token_marginal).toEqual([{ value: 100, docs: 3 }]);
    expect(dist.image_marginal).toEqual([{ value: 2, docs: 3 }]);
  });

  it("sorts cells by token bin then image count", () => {
    const report = makeReport([entry(60, 1), entry(10, 3), entry(10, 0), entry(60, 0)], 50);
    const dist = jointDistribution(report);
    expect(dist.cells.map((c) => [c.tokens_bin, c.images])).toEqual([
      [0, 0],
      [0, 3],
      [50, 0],
      [50, 1],
    ]);
  });

  it("rejects a missing or broken bin width", () => {
    const report = makeReport([entry(10, 1)], 50);
    report.token_bin_width = 0;
    expect(() => jointDistribution(report)).toThrow(/token_bin_width/);
  });
});
