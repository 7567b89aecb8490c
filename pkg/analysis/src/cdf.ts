import type { StatsReport } from "./types.js";

export interface ImageCdfPoint {
  images: number;
  /** Percent of documents holding at most this many images. */
  doc_percent: number;
  /** Percent of all images that sit in such documents. */
  image_percent: number;
}

export interface ImageCdf {
  doc_count: number;
  image_count: number;
  points: ImageCdfPoint[];
}

/**
 * Cumulative image-count distribution, both document-weighted and
 * image-weighted. Each series is non-decreasing and ends at exactly 100.
 */
export function imageDistributionCurve(report: StatsReport): ImageCdf {
  const entries = report.per_doc;
  if (entries.length === 0) {
    throw new Error("stats export contains no documents");
  }
  const docCounts = new Map<number, number>();
  let totalImages = 0;
  for (const entry of entries) {
    docCounts.set(entry.images, (docCounts.get(entry.images) ?? 0) + 1);
    totalImages += entry.images;
  }

  const points: ImageCdfPoint[] = [];
  let cumulativeDocs = 0;
  let cumulativeImages = 0;
  for (const images of [...docCounts.keys()].sort((a, b) => a - b)) {
    const docs = docCounts.get(images)!;
    cumulativeDocs += docs;
    cumulativeImages += docs * images;
    points.push({
      images,
      doc_percent: (100 * cumulativeDocs) / entries.length,
      // Vacuously complete when the corpus holds no images at all.
      image_percent: totalImages === 0 ? 100 : (100 * cumulativeImages) / totalImages,
    });
  }
  return { doc_count: entries.length, image_count: totalImages, points };
}
