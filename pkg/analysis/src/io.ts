import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import type { CorpusDocument, StatsReport } from "./types.js";

export function readStatsReport(path: string): StatsReport {
  let raw: string;
  try {
    raw = readFileSync(path, "utf-8");
  } catch (err) {
    throw new Error(`cannot read stats file ${path}: ${(err as Error).message}`);
  }
  const report = JSON.parse(raw) as StatsReport;
  if (!Array.isArray(report.per_doc)) {
    throw new Error(`${path} is not a stats export: missing per_doc list`);
  }
  return report;
}

/** Read a corpus JSONL export, one document per line. */
export function readCorpusDocuments(path: string): CorpusDocument[] {
  let raw: string;
  try {
    raw = readFileSync(path, "utf-8");
  } catch (err) {
    throw new Error(`cannot read corpus file ${path}: ${(err as Error).message}`);
  }
  const docs: CorpusDocument[] = [];
  for (const line of raw.split("\n")) {
    if (!line.trim()) continue;
    docs.push(JSON.parse(line) as CorpusDocument);
  }
  return docs;
}

/** Concatenated text bodies of one document, in segment order. */
export function documentText(doc: CorpusDocument): string {
  const parts: string[] = [];
  for (const segment of doc.segments) {
    if (segment.kind === "text") parts.push(segment.body);
  }
  return parts.join("\n");
}

/**
 * Word list format shared with the pipeline: one entry per line,
 * blank lines and # comments skipped, entries lowercased and NFC-normalized.
 */
export function readWordList(path: string): Set<string> {
  const words = new Set<string>();
  for (const line of readFileSync(path, "utf-8").split("\n")) {
    const entry = line.trim();
    if (!entry || entry.startsWith("#")) continue;
    words.add(entry.toLowerCase().normalize("NFC"));
  }
  return words;
}

export function writeJson(dir: string, name: string, value: unknown): string {
  mkdirSync(dir, { recursive: true });
  const path = join(dir, name);
  writeFileSync(path, JSON.stringify(value, null, 2) + "\n", "utf-8");
  return path;
}

export function writeText(dir: string, name: string, body: string): string {
  mkdirSync(dir, { recursive: true });
  const path = join(dir, name);
  writeFileSync(path, body, "utf-8");
  return path;
}
