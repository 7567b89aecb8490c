import type { JointCell, StatsReport } from "./types.js";

export interface MarginalBin {
  value: number;
  docs: number;
}

export interface JointDistribution {
  doc_count: number;
  token_bin_width: number;
  /** Occupied (token bin, image count) cells, sorted by bin then images. */
  cells: JointCell[];
  /** Documents per token bin; sums to doc_count. */
  token_marginal: MarginalBin[];
  /** Documents per image count; sums to doc_count. */
  image_marginal: MarginalBin[];
}

/**
 * Joint distribution of tokens and images per document, rebinned from the
 * per-document entries rather than copied from the export's own histogram,
 * so the two can be cross-checked.
 */
export function jointDistribution(report: StatsReport): JointDistribution {
  const width = report.token_bin_width;
  if (!Number.isInteger(width) || width < 1) {
    throw new Error(`stats export has invalid token_bin_width: ${width}`);
  }
  const cellCounts = new Map<string, JointCell>();
  const tokenBins = new Map<number, number>();
  const imageBins = new Map<number, number>();
  for (const entry of report.per_doc) {
    const bin = Math.floor(entry.tokens / width) * width;
    const key = `${bin}:${entry.images}`;
    const cell = cellCounts.get(key);
    if (cell) {
      cell.count++;
    } else {
      cellCounts.set(key, { tokens_bin: bin, images: entry.images, count: 1 });
    }
    tokenBins.set(bin, (tokenBins.get(bin) ?? 0) + 1);
    imageBins.set(entry.images, (imageBins.get(entry.images) ?? 0) + 1);
  }

  const cells = [...cellCounts.values()].sort(
    (a, b) => a.tokens_bin - b.tokens_bin || a.images - b.images,
  );
  const marginal = (bins: Map<number, number>): MarginalBin[] =>
    [...bins.entries()].sort((a, b) => a[0] - b[0]).map(([value, docs]) => ({ value, docs }));

  return {
    doc_count: report.per_doc.length,
    token_bin_width: width,
    cells,
    token_marginal: marginal(tokenBins),
    image_marginal: marginal(imageBins),
  };
}
