/** Shapes of the pipeline's exported stats JSON and corpus JSONL. */

export interface PerDocEntry {
  doc_id: string;
  domain: string;
  tokens: number;
  images: number;
  /** Present when the export was made with per-document perplexity enabled. */
  perplexity?: number;
}

export interface JointCell {
  tokens_bin: number;
  images: number;
  count: number;
}

export interface DocCdfPoint {
  images: number;
  cumulative_fraction: number;
}

export interface DomainCount {
  domain: string;
  docs: number;
}

export interface StatsReport {
  doc_count: number;
  image_count: number;
  token_count: number;
  token_bin_width: number;
  joint_histogram: JointCell[];
  image_cdf: DocCdfPoint[];
  top_domains: DomainCount[];
  per_doc: PerDocEntry[];
  perplexity_median?: number;
}

export interface TextSegment {
  kind: "text";
  body: string;
}

export interface ImageSegment {
  kind: "image";
  url: string;
  width?: number;
  height?: number;
  format?: string;
  alt?: string;
}

export interface CorpusDocument {
  url: string;
  fetch_time: number;
  doc_id?: string;
  segments: Array<TextSegment | ImageSegment>;
}
