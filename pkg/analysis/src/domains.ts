import type { StatsReport } from "./types.js";

export interface DomainRank {
  domain: string;
  docs: number;
  share: number;
}

/**
 * Documents per domain, recounted from per-document entries. Ordered by
 * count descending with ties broken alphabetically, the same ordering the
 * export's own top_domains list uses.
 */
export function domainRanking(report: StatsReport, top?: number): DomainRank[] {
  const counts = new Map<string, number>();
  for (const entry of report.per_doc) {
    counts.set(entry.domain, (counts.get(entry.domain) ?? 0) + 1);
  }
  const total = report.per_doc.length;
  const ranked = [...counts.entries()]
    .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
    .map(([domain, docs]) => ({ domain, docs, share: total ? docs / total : 0 }));
  return top === undefined ? ranked : ranked.slice(0, top);
}
