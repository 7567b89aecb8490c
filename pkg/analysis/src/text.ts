import { readWordList } from "./io.js";

/** Marker paragraph the pipeline appends to every document; never a topic word. */
export const SENTINEL_TOKEN = "END_OF_DOCUMENT_TOKEN_TO_BE_REPLACED";

const EDGE_PUNCTUATION = /^[^\p{L}\p{N}]+|[^\p{L}\p{N}]+$/gu;
const HAS_LETTER = /\p{L}/u;

export function defaultStopWords(): Set<string> {
  return readWordList(new URL("../data/stopwords_en.txt", import.meta.url).pathname);
}

/**
 * Tokenize one document for topic modeling: NFC-normalize, split on
 * whitespace, drop the sentinel marker, lowercase, trim punctuation off
 * token edges, then drop stop words, single characters, and tokens
 * without any letter (bare numbers, dashes).
 */
export function topicTokens(text: string, stopWords: Set<string>): string[] {
  const tokens: string[] = [];
  for (const raw of text.normalize("NFC").split(/\s+/)) {
    if (!raw || raw === SENTINEL_TOKEN) continue;
    const word = raw.toLowerCase().replace(EDGE_PUNCTUATION, "");
    if (word.length < 2 || !HAS_LETTER.test(word)) continue;
    if (stopWords.has(word)) continue;
    tokens.push(word);
  }
  return tokens;
}

/** Tokenize a whole corpus; documents left empty by filtering are kept as []. */
export function prepareCorpus(texts: string[], stopWords: Set<string>): string[][] {
  return texts.map((text) => topicTokens(text, stopWords));
}
