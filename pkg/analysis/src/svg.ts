/** Dependency-free SVG builders; figures are pure views over the JSON data. */

import type { JointDistribution } from "./heatmap.js";
import type { DomainRank } from "./domains.js";

const PALETTE = ["#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951", "#a463f2"];
const FONT = 'font-family="sans-serif"';

function esc(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number): string {
  return Number(value.toPrecision(4)).toString();
}

function open(width: number, height: number): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n<rect width="${width}" height="${height}" fill="white"/>\n`
  );
}

export interface ChartSeries {
  label: string;
  points: Array<{ x: number; y: number }>;
}

export interface LineChartOptions {
  title: string;
  x_label: string;
  y_label: string;
  width?: number;
  height?: number;
  markers?: boolean;
}

export function lineChart(series: ChartSeries[], opts: LineChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 440;
  const m = { left: 64, right: 20, top: 40, bottom: 48 };
  const innerW = width - m.left - m.right;
  const innerH = height - m.top - m.bottom;

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMax = Math.max(...ys, 0);
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax || 1;
  const X = (x: number) => m.left + ((x - xMin) / xSpan) * innerW;
  const Y = (y: number) => m.top + innerH - (y / ySpan) * innerH;

  let body = open(width, height);
  body += `<text x="${width / 2}" y="22" text-anchor="middle" ${FONT} font-size="15">${esc(opts.title)}</text>\n`;
  body += `<line x1="${m.left}" y1="${m.top + innerH}" x2="${m.left + innerW}" y2="${m.top + innerH}" stroke="#333"/>\n`;
  body += `<line x1="${m.left}" y1="${m.top}" x2="${m.left}" y2="${m.top + innerH}" stroke="#333"/>\n`;

  for (let i = 0; i <= 4; i++) {
    const xv = xMin + (xSpan * i) / 4;
    const yv = (ySpan * i) / 4;
    body += `<text x="${X(xv)}" y="${m.top + innerH + 18}" text-anchor="middle" ${FONT} font-size="11">${fmt(xv)}</text>\n`;
    body += `<text x="${m.left - 6}" y="${Y(yv) + 4}" text-anchor="end" ${FONT} font-size="11">${fmt(yv)}</text>\n`;
    if (i > 0) {
      body += `<line x1="${m.left}" y1="${Y(yv)}" x2="${m.left + innerW}" y2="${Y(yv)}" stroke="#ddd"/>\n`;
    }
  }
  body += `<text x="${m.left + innerW / 2}" y="${height - 10}" text-anchor="middle" ${FONT} font-size="12">${esc(opts.x_label)}</text>\n`;
  body += `<text x="16" y="${m.top + innerH / 2}" text-anchor="middle" ${FONT} font-size="12" transform="rotate(-90 16 ${m.top + innerH / 2})">${esc(opts.y_label)}</text>\n`;

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = s.points.map((p) => `${X(p.x).toFixed(2)},${Y(p.y).toFixed(2)}`).join(" ");
    body += `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"/>\n`;
    if (opts.markers) {
      for (const p of s.points) {
        body += `<circle cx="${X(p.x).toFixed(2)}" cy="${Y(p.y).toFixed(2)}" r="3" fill="${color}"/>\n`;
      }
    }
    const ly = m.top + 14 + i * 16;
    body += `<rect x="${m.left + innerW - 150}" y="${ly - 9}" width="12" height="12" fill="${color}"/>\n`;
    body += `<text x="${m.left + innerW - 133}" y="${ly + 1}" ${FONT} font-size="12">${esc(s.label)}</text>\n`;
  });
  return body + "</svg>\n";
}

export function heatmapChart(dist: JointDistribution, title: string): string {
  const bins = dist.token_marginal.map((b) => b.value);
  const imageRows = dist.image_marginal.map((b) => b.value);
  const cellW = Math.max(36, Math.min(64, Math.floor(560 / bins.length)));
  const cellH = 28;
  const m = { left: 70, top: 48, bottom: 44 };
  const width = m.left + cellW * bins.length + 20;
  const height = m.top + cellH * imageRows.length + m.bottom;
  const maxCount = Math.max(...dist.cells.map((c) => c.count));

  const col = new Map(bins.map((b, i) => [b, i]));
  // Largest image count at the top row.
  const row = new Map(imageRows.map((v, i) => [v, imageRows.length - 1 - i]));

  let body = open(width, height);
  body += `<text x="${width / 2}" y="22" text-anchor="middle" ${FONT} font-size="15">${esc(title)}</text>\n`;
  for (const cell of dist.cells) {
    const x = m.left + col.get(cell.tokens_bin)! * cellW;
    const y = m.top + row.get(cell.images)! * cellH;
    const opacity = 0.15 + 0.85 * (cell.count / maxCount);
    body += `<rect x="${x}" y="${y}" width="${cellW - 2}" height="${cellH - 2}" fill="#4269d0" fill-opacity="${opacity.toFixed(3)}"/>\n`;
    body += `<text x="${x + (cellW - 2) / 2}" y="${y + cellH / 2 + 3}" text-anchor="middle" ${FONT} font-size="11" fill="#111">${cell.count}</text>\n`;
  }
  bins.forEach((b, i) => {
    body += `<text x="${m.left + i * cellW + (cellW - 2) / 2}" y="${m.top + cellH * imageRows.length + 16}" text-anchor="middle" ${FONT} font-size="11">${b}</text>\n`;
  });
  imageRows.forEach((v) => {
    const y = m.top + row.get(v)! * cellH + cellH / 2 + 3;
    body += `<text x="${m.left - 8}" y="${y}" text-anchor="end" ${FONT} font-size="11">${v}</text>\n`;
  });
  body += `<text x="${m.left + (cellW * bins.length) / 2}" y="${height - 8}" text-anchor="middle" ${FONT} font-size="12">tokens (bin lower edge)</text>\n`;
  body += `<text x="16" y="${m.top + (cellH * imageRows.length) / 2}" text-anchor="middle" ${FONT} font-size="12" transform="rotate(-90 16 ${m.top + (cellH * imageRows.length) / 2})">images</text>\n`;
  return body + "</svg>\n";
}

export function barChart(ranks: DomainRank[], title: string): string {
  const barH = 22;
  const m = { left: 230, top: 44, right: 70 };
  const width = 640;
  const height = m.top + ranks.length * barH + 16;
  const maxDocs = Math.max(...ranks.map((r) => r.docs), 1);

  let body = open(width, height);
  body += `<text x="${width / 2}" y="22" text-anchor="middle" ${FONT} font-size="15">${esc(title)}</text>\n`;
  ranks.forEach((rank, i) => {
    const y = m.top + i * barH;
    const w = ((width - m.left - m.right) * rank.docs) / maxDocs;
    body += `<text x="${m.left - 8}" y="${y + barH / 2 + 4}" text-anchor="end" ${FONT} font-size="12">${esc(rank.domain)}</text>\n`;
    body += `<rect x="${m.left}" y="${y + 3}" width="${w.toFixed(1)}" height="${barH - 6}" fill="#4269d0"/>\n`;
    body += `<text x="${m.left + w + 6}" y="${y + barH / 2 + 4}" ${FONT} font-size="12">${rank.docs}</text>\n`;
  });
  return body + "</svg>\n";
}
