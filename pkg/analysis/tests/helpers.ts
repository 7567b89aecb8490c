import { readFileSync } from "node:fs";
import type { PerDocEntry, StatsReport } from "../src/types.js";

export function fixturePath(name: string): string {
  return new URL(`./fixtures/${name}`, import.meta.url).pathname;
}

export function loadFixtureStats(): StatsReport {
  return JSON.parse(readFileSync(fixturePath("stats.json"), "utf-8")) as StatsReport;
}

let nextId = 0;

export function entry(tokens: number, images: number, domain = "a.example.com", perplexity?: number): PerDocEntry {
  const e: PerDocEntry = { doc_id: `t${nextId++}`, domain, tokens, images };
  if (perplexity !== undefined) e.perplexity = perplexity;
  return e;
}

/** Minimal stats export wrapping per-document entries; histograms left empty. */
export function makeReport(perDoc: PerDocEntry[], tokenBinWidth = 50): StatsReport {
  return {
    doc_count: perDoc.length,
    image_count: perDoc.reduce((a, e) => a + e.images, 0),
    token_count: perDoc.reduce((a, e) => a + e.tokens, 0),
    token_bin_width: tokenBinWidth,
    joint_histogram: [],
    image_cdf: [],
    top_domains: [],
    per_doc: perDoc,
  };
}

/** Small LCG, independent of the package's own PRNG, for test corpora. */
export function lcg(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (Math.imul(state, 1664525) + 1013904223) >>> 0;
    return state / 4294967296;
  };
}
