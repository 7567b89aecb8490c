import { describe, expect, it } from "vitest";
import { domainRanking } from "../src/domains.js";
import { entry, loadFixtureStats, makeReport } from "./helpers.js";

describe("domainRanking", () => {
  it("reproduces the export's own top-domain table", () => {
    const report = loadFixtureStats();
    const ranks = domainRanking(report, report.top_domains.length);
    expect(ranks.map((r) => ({ domain: r.domain, docs: r.docs }))).toEqual(report.top_domains);
  });

  it("has shares that sum to one over the full ranking", () => {
    const ranks = domainRanking(loadFixtureStats());
    const total = ranks.reduce((a, r) => a + r.share, 0);
    expect(Math.abs(total - 1)).toBeLessThan(1e-9);
  });

  it("breaks count ties alphabetically", () => {
    const report = makeReport([
      entry(10, 1, "b.example.com"),
      entry(10, 1, "a.example.com"),
      entry(10, 1, "c.example.com"),
      entry(10, 1, "c.example.com"),
    ]);
    const ranks = domainRanking(report);
    expect(ranks.map((r) => r.domain)).toEqual(["c.example.com", "a.example.com", "b.example.com"]);
  });

  it("honors the row limit", () => {
    const ranks = domainRanking(loadFixtureStats(), 2);
    expect(ranks.length).toBe(2);
  });
});
