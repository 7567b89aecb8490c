#!/usr/bin/env node
import { basename } from "node:path";
import { pathToFileURL } from "node:url";
import { documentText, readCorpusDocuments, readStatsReport, writeJson, writeText } from "./io.js";
import { defaultStopWords, prepareCorpus } from "./text.js";
import { fitLda, renderTopics } from "./lda.js";
import { densityMode, kdeCurves } from "./kde.js";
import { jointDistribution } from "./heatmap.js";
import { imageDistributionCurve } from "./cdf.js";
import { domainRanking } from "./domains.js";
import { barChart, heatmapChart, lineChart } from "./svg.js";

const USAGE = `usage: analyze <command> --input <path> [--input <path> ...] --out <dir> [options]

commands
  lda       topic model over a corpus JSONL export           (input: corpus)
  kde       perplexity density curves, one per stats export  (inputs: 2+ stats)
  heatmap   joint token/image distribution with marginals    (input: stats)
  cdf       cumulative image-count distribution              (input: stats)
  domains   documents per domain, ranked                     (input: stats)

options
  --k <n>           topics to fit (lda, default 20)
  --seed <n>        sampler seed (lda, default 13)
  --iterations <n>  Gibbs sweeps (lda, default 200)
  --top-words <n>   words listed per topic (lda, default 20)
  --grid <n>        density evaluation points (kde, default 200)
  --labels <a,b>    curve labels (kde, default input basenames)
  --top <n>         rows kept (domains, default 20)
`;

interface Args {
  command: string;
  inputs: string[];
  out: string;
  k?: number;
  seed?: number;
  iterations?: number;
  topWords?: number;
  grid?: number;
  labels?: string[];
  top?: number;
}

function intFlag(flag: string, value: string | undefined): number {
  const parsed = Number(value);
  if (value === undefined || !Number.isInteger(parsed)) {
    throw new Error(`${flag} expects an integer, got ${value ?? "nothing"}`);
  }
  return parsed;
}

function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  if (!command) throw new Error("no command given");
  const args: Args = { command, inputs: [], out: "" };
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i];
    const value = rest[i + 1];
    switch (flag) {
      case "--input":
        if (value === undefined) throw new Error("--input expects a path");
        args.inputs.push(value);
        i++;
        break;
      case "--out":
        if (value === undefined) throw new Error("--out expects a directory");
        args.out = value;
        i++;
        break;
      case "--k":
        args.k = intFlag(flag, value);
        i++;
        break;
      case "--seed":
        args.seed = intFlag(flag, value);
        i++;
        break;
      case "--iterations":
        args.iterations = intFlag(flag, value);
        i++;
        break;
      case "--top-words":
        args.topWords = intFlag(flag, value);
        i++;
        break;
      case "--grid":
        args.grid = intFlag(flag, value);
        i++;
        break;
      case "--top":
        args.top = intFlag(flag, value);
        i++;
        break;
      case "--labels":
        if (value === undefined) throw new Error("--labels expects a comma-separated list");
        args.labels = value.split(",").map((s) => s.trim());
        i++;
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (args.inputs.length === 0) throw new Error("--input is required");
  if (!args.out) throw new Error("--out is required");
  return args;
}

function singleInput(args: Args): string {
  if (args.inputs.length !== 1) {
    throw new Error(`${args.command} takes exactly one --input, got ${args.inputs.length}`);
  }
  return args.inputs[0];
}

function runLda(args: Args): void {
  const docs = readCorpusDocuments(singleInput(args));
  const tokens = prepareCorpus(docs.map(documentText), defaultStopWords());
  const result = fitLda(tokens, args.k ?? 20, {
    seed: args.seed,
    iterations: args.iterations,
    top_words: args.topWords,
  });
  console.log(writeJson(args.out, "lda.json", result));
  console.log(writeText(args.out, "lda.txt", renderTopics(result)));
  console.log(
    `fitted ${result.k} topics over ${result.doc_count} documents ` +
      `(vocabulary ${result.vocabulary_size}, ${result.total_tokens} tokens)`,
  );
}

function runKde(args: Args): void {
  if (args.inputs.length < 2) {
    throw new Error("kde compares corpora; give at least two --input stats files");
  }
  const labels = args.labels ?? args.inputs.map((p) => basename(p).replace(/\.json$/, ""));
  if (labels.length !== args.inputs.length) {
    throw new Error(`${labels.length} labels for ${args.inputs.length} inputs`);
  }
  const corpora = args.inputs.map((path, i) => {
    const report = readStatsReport(path);
    const samples = report.per_doc
      .map((e) => e.perplexity)
      .filter((v): v is number => typeof v === "number");
    if (samples.length === 0) {
      throw new Error(`${path} has no per-document perplexity; re-export with it enabled`);
    }
    return { label: labels[i], samples };
  });
  const plot = kdeCurves(corpora, args.grid ?? 200);
  console.log(writeJson(args.out, "kde.json", plot));
  const series = plot.curves.map((c) => ({
    label: c.label,
    points: c.points.map((p) => ({ x: p.x, y: p.density })),
  }));
  const svg = lineChart(series, {
    title: "Perplexity distribution",
    x_label: "perplexity",
    y_label: "density",
  });
  console.log(writeText(args.out, "kde.svg", svg));
  for (const curve of plot.curves) {
    console.log(`${curve.label}: n=${curve.n} mode=${densityMode(curve).toFixed(1)}`);
  }
}

function runHeatmap(args: Args): void {
  const dist = jointDistribution(readStatsReport(singleInput(args)));
  console.log(writeJson(args.out, "heatmap.json", dist));
  console.log(writeText(args.out, "heatmap.svg", heatmapChart(dist, "Tokens vs images per document")));
  console.log(`${dist.cells.length} occupied cells over ${dist.doc_count} documents`);
}

function runCdf(args: Args): void {
  const cdf = imageDistributionCurve(readStatsReport(singleInput(args)));
  console.log(writeJson(args.out, "image_cdf.json", cdf));
  const series = [
    { label: "documents", points: cdf.points.map((p) => ({ x: p.images, y: p.doc_percent })) },
    { label: "images", points: cdf.points.map((p) => ({ x: p.images, y: p.image_percent })) },
  ];
  const svg = lineChart(series, {
    title: "Share in documents with at most x images",
    x_label: "images per document",
    y_label: "cumulative %",
    markers: true,
  });
  console.log(writeText(args.out, "image_cdf.svg", svg));
  console.log(`${cdf.points.length} steps, ${cdf.image_count} images in ${cdf.doc_count} documents`);
}

function runDomains(args: Args): void {
  const ranks = domainRanking(readStatsReport(singleInput(args)), args.top ?? 20);
  console.log(writeJson(args.out, "domains.json", ranks));
  console.log(writeText(args.out, "domains.svg", barChart(ranks, "Documents per domain")));
  for (const rank of ranks.slice(0, 5)) {
    console.log(`${String(rank.docs).padStart(6)}  ${rank.domain}`);
  }
}

const COMMANDS: Record<string, (args: Args) => void> = {
  lda: runLda,
  kde: runKde,
  heatmap: runHeatmap,
  cdf: runCdf,
  domains: runDomains,
};

export function run(argv: string[]): number {
  if (argv.length === 0 || argv[0] === "--help" || argv[0] === "-h") {
    process.stdout.write(USAGE);
    return argv.length === 0 ? 2 : 0;
  }
  try {
    const args = parseArgs(argv);
    const handler = COMMANDS[args.command];
    if (!handler) throw new Error(`unknown command ${args.command}`);
    handler(args);
    return 0;
  } catch (err) {
    process.stderr.write(`analyze: ${(err as Error).message}\n`);
    return 2;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(run(process.argv.slice(2)));
}
