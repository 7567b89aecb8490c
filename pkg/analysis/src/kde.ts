export interface KdePoint {
  x: number;
  density: number;
}

export interface KdeCurve {
  label: string;
  n: number;
  bandwidth: number;
  points: KdePoint[];
}

export interface KdePlotData {
  grid_points: number;
  curves: KdeCurve[];
}

const SQRT_2PI = Math.sqrt(2 * Math.PI);

function gaussian(u: number): number {
  return Math.exp(-0.5 * u * u) / SQRT_2PI;
}

function quantileGap(sorted: number[]): number {
  const lower = sorted[Math.floor(sorted.length / 4)];
  const upper = sorted[Math.floor((3 * sorted.length) / 4)];
  return upper - lower;
}

/**
 * Rule-of-thumb bandwidth h = 0.9 * min(sd, iqr / 1.34) * n^(-1/5).
 * Falls back to sd alone when the interquartile range collapses, and to 1
 * when every sample is identical.
 */
export function silvermanBandwidth(samples: number[]): number {
  const n = samples.length;
  if (n < 2) {
    throw new Error(`need at least 2 samples for a density estimate, got ${n}`);
  }
  const mean = samples.reduce((a, b) => a + b, 0) / n;
  const variance = samples.reduce((a, b) => a + (b - mean) * (b - mean), 0) / (n - 1);
  const sd = Math.sqrt(variance);
  const sorted = [...samples].sort((a, b) => a - b);
  const iqr = quantileGap(sorted);
  const scale = Math.min(sd, iqr / 1.34) || sd || 1;
  return 0.9 * scale * Math.pow(n, -0.2);
}

/** Normalized Gaussian KDE of the samples, evaluated at each grid value. */
export function gaussianKde(samples: number[], bandwidth: number, grid: number[]): number[] {
  const n = samples.length;
  return grid.map((x) => {
    let sum = 0;
    for (const value of samples) sum += gaussian((x - value) / bandwidth);
    return sum / (n * bandwidth);
  });
}

/**
 * Density curves for several corpora on one shared grid so the curves are
 * directly comparable. The grid spans all samples padded by three times the
 * widest bandwidth.
 */
export function kdeCurves(
  corpora: Array<{ label: string; samples: number[] }>,
  gridPoints = 200,
): KdePlotData {
  if (corpora.length === 0) {
    throw new Error("no corpora given");
  }
  if (gridPoints < 2) {
    throw new Error(`grid needs at least 2 points, got ${gridPoints}`);
  }
  const bandwidths = corpora.map(({ label, samples }) => {
    if (samples.length < 2) {
      throw new Error(`corpus "${label}" has ${samples.length} samples; need at least 2`);
    }
    return silvermanBandwidth(samples);
  });
  const pad = 3 * Math.max(...bandwidths);
  const lo = Math.min(...corpora.map((c) => Math.min(...c.samples))) - pad;
  const hi = Math.max(...corpora.map((c) => Math.max(...c.samples))) + pad;
  const step = (hi - lo) / (gridPoints - 1);
  const grid = Array.from({ length: gridPoints }, (_, i) => lo + i * step);

  const curves = corpora.map(({ label, samples }, i) => {
    const density = gaussianKde(samples, bandwidths[i], grid);
    return {
      label,
      n: samples.length,
      bandwidth: bandwidths[i],
      points: grid.map((x, j) => ({ x, density: density[j] })),
    };
  });
  return { grid_points: gridPoints, curves };
}

/** x position of the curve's highest density value. */
export function densityMode(curve: KdeCurve): number {
  let best = curve.points[0];
  for (const point of curve.points) {
    if (point.density > best.density) best = point;
  }
  return best.x;
}
