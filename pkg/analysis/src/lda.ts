import { mulberry32 } from "./rng.js";

export interface LdaOptions {
  /** Document-topic prior; defaults to 50 / k. */
  alpha?: number;
  /** Topic-word prior. */
  beta?: number;
  /** Gibbs sweeps over the whole corpus. */
  iterations?: number;
  seed?: number;
  /** Words reported per topic (fewer if the vocabulary is smaller). */
  top_words?: number;
}

export interface TopicWord {
  word: string;
  weight: number;
}

export interface Topic {
  words: TopicWord[];
  /** Fraction of corpus tokens assigned to this topic at the final sweep. */
  proportion: number;
}

export interface TopicModelResult {
  k: number;
  alpha: number;
  beta: number;
  iterations: number;
  seed: number;
  doc_count: number;
  vocabulary_size: number;
  total_tokens: number;
  /** Topics ordered by corpus proportion, largest first. Proportions sum to 1. */
  topics: Topic[];
}

/**
 * Latent Dirichlet Allocation by collapsed Gibbs sampling.
 *
 * Documents arrive pre-tokenized (see prepareCorpus). The estimate is the
 * final sampler state rather than an average over sweeps, which keeps runs
 * bit-reproducible from the seed. Intended corpus size is 100+ documents;
 * smaller samples fit but topic quality degrades.
 */
export function fitLda(docs: string[][], k: number, options: LdaOptions = {}): TopicModelResult {
  if (!Number.isInteger(k) || k < 2) {
    throw new Error(`topic count must be an integer >= 2, got ${k}`);
  }
  if (docs.length === 0) {
    throw new Error("cannot fit topics on an empty corpus");
  }
  const alpha = options.alpha ?? 50 / k;
  const beta = options.beta ?? 0.01;
  const iterations = options.iterations ?? 200;
  const seed = options.seed ?? 13;
  const topWords = options.top_words ?? 20;

  // Vocabulary ids in first-appearance order keep the fit deterministic.
  const wordIds = new Map<string, number>();
  const words: string[] = [];
  let totalTokens = 0;
  const docTokens: Int32Array[] = docs.map((doc) => {
    const ids = new Int32Array(doc.length);
    doc.forEach((word, i) => {
      let id = wordIds.get(word);
      if (id === undefined) {
        id = words.length;
        wordIds.set(word, id);
        words.push(word);
      }
      ids[i] = id;
    });
    totalTokens += doc.length;
    return ids;
  });
  const V = words.length;
  if (totalTokens === 0) {
    throw new Error("corpus has no usable tokens after preprocessing");
  }

  const rand = mulberry32(seed);
  const nw = new Int32Array(V * k); // word-topic counts, [word * k + topic]
  const nd = new Int32Array(docs.length * k); // doc-topic counts
  const nwsum = new Int32Array(k);
  const assignments = docTokens.map((ids) => new Int32Array(ids.length));

  for (let m = 0; m < docTokens.length; m++) {
    const ids = docTokens[m];
    const z = assignments[m];
    for (let n = 0; n < ids.length; n++) {
      const topic = Math.floor(rand() * k);
      z[n] = topic;
      nw[ids[n] * k + topic]++;
      nd[m * k + topic]++;
      nwsum[topic]++;
    }
  }

  const p = new Float64Array(k);
  const vBeta = V * beta;
  for (let iter = 0; iter < iterations; iter++) {
    for (let m = 0; m < docTokens.length; m++) {
      const ids = docTokens[m];
      const z = assignments[m];
      const docLen = ids.length;
      for (let n = 0; n < docLen; n++) {
        const w = ids[n];
        let topic = z[n];
        nw[w * k + topic]--;
        nd[m * k + topic]--;
        nwsum[topic]--;

        let cumulative = 0;
        for (let t = 0; t < k; t++) {
          cumulative +=
            ((nw[w * k + t] + beta) / (nwsum[t] + vBeta)) * (nd[m * k + t] + alpha);
          p[t] = cumulative;
        }
        const u = rand() * cumulative;
        for (topic = 0; topic < k - 1; topic++) {
          if (u < p[topic]) break;
        }

        z[n] = topic;
        nw[w * k + topic]++;
        nd[m * k + topic]++;
        nwsum[topic]++;
      }
    }
  }

  const topics: Topic[] = [];
  for (let t = 0; t < k; t++) {
    const weighted: TopicWord[] = [];
    for (let w = 0; w < V; w++) {
      weighted.push({ word: words[w], weight: (nw[w * k + t] + beta) / (nwsum[t] + vBeta) });
    }
    weighted.sort((a, b) => b.weight - a.weight || (a.word < b.word ? -1 : 1));
    topics.push({
      words: weighted.slice(0, Math.min(topWords, V)),
      proportion: nwsum[t] / totalTokens,
    });
  }
  topics.sort((a, b) => b.proportion - a.proportion);

  return {
    k,
    alpha,
    beta,
    iterations,
    seed,
    doc_count: docs.length,
    vocabulary_size: V,
    total_tokens: totalTokens,
    topics,
  };
}

/** Plain-text rendering of a fitted model, one topic per block. */
export function renderTopics(result: TopicModelResult): string {
  const lines: string[] = [];
  result.topics.forEach((topic, i) => {
    lines.push(`topic ${i} (${(topic.proportion * 100).toFixed(1)}% of tokens)`);
    lines.push("  " + topic.words.map((tw) => tw.word).join(" "));
  });
  return lines.join("\n") + "\n";
}
