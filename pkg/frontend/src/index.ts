import { join } from "path";
import { GenforgeCliError, runGenforge, withScratchDir, writeJsonl } from "./cli";

export { GenforgeCliError, runGenforge } from "./cli";

/**
 * Thin bindings over the `genforge` command-line tool. Every function here
 * shells out to the CLI and parses its JSON output; no scoring or corruption
 * logic lives on this side, so the numbers are the CLI's numbers.
 */

export type TokenizerMode = "word" | "whitespace" | "char";

export interface EvaluateOptions {
  tokenizerMode?: TokenizerMode;
}

/**
 * Scores keyed by metric name. `evaluate` always yields numbers (a metric
 * that is undefined on the input is a CLI error, not a null); nulls appear
 * only in `copyRateProfile`, for orders no hypothesis can form.
 */
export type Scores = Record<string, number | null>;

export async function evaluate(
  hypotheses: string[],
  references: string[][],
  metrics: string[],
  options: EvaluateOptions = {},
): Promise<Scores> {
  if (hypotheses.length !== references.length) {
    throw new GenforgeCliError(
      `got ${hypotheses.length} hypotheses for ${references.length} references`,
      -1, "");
  }
  return withScratchDir(async (dir) => {
    const refPath = join(dir, "refs.jsonl");
    const hypPath = join(dir, "hyps.jsonl");
    await writeJsonl(refPath, references.map((refs, i) => ({
      id: `h${i}`, source: "", target: refs,
    })));
    await writeJsonl(hypPath, hypotheses.map((hypothesis, i) => ({
      id: `h${i}`, hypothesis,
    })));
    const args = ["eval", "--hyp", hypPath, "--ref", refPath,
                  "--metrics", metrics.join(",")];
    if (options.tokenizerMode) {
      args.push("--tokenizer-mode", options.tokenizerMode);
    }
    const report = JSON.parse(await runGenforge(args));
    return report.corpus as Scores;
  });
}

async function single(metric: string, hypotheses: string[],
                      references: string[][],
                      options?: EvaluateOptions): Promise<number | null> {
  const scores = await evaluate(hypotheses, references, [metric], options);
  return scores[metric];
}

export const bleu = (h: string[], r: string[][], o?: EvaluateOptions) =>
  single("bleu", h, r, o);
export const rougeN = (h: string[], r: string[][], n: number, o?: EvaluateOptions) =>
  single(`rouge-${n}`, h, r, o);
export const rougeL = (h: string[], r: string[][], o?: EvaluateOptions) =>
  single("rouge-l", h, r, o);
export const meteor = (h: string[], r: string[][], o?: EvaluateOptions) =>
  single("meteor", h, r, o);
export const exactMatch = (h: string[], r: string[][], o?: EvaluateOptions) =>
  single("exact-match", h, r, o);
export const tokenF1 = (h: string[], r: string[][], o?: EvaluateOptions) =>
  single("token-f1", h, r, o);

/** Reference-free: each hypothesis stands in as its own reference row. */
export const distinctN = (h: string[], n: number, o?: EvaluateOptions) =>
  single(`distinct-${n}`, h, h.map((text) => [text]), o);
export const selfBleu = (h: string[], o?: EvaluateOptions) =>
  single("self-bleu", h, h.map((text) => [text]), o);

export type Objective = "lm" | "masked-seq2seq" | "denoising" | "span-prediction";

export interface CorruptOptions {
  objective?: Objective;
  maskRatio?: number;
  meanSpan?: number;
  permuteSentences?: boolean;
  seed?: number;
}

export interface CorruptedPair {
  input: string[];
  target: string[];
  plan: Record<string, unknown>;
}

/**
 * Corrupt one token sequence for pre-training. Deterministic for a given
 * seed: the CLI mixes the seed with the record id, and the id is fixed here.
 */
export async function corrupt(tokens: string[],
                              options: CorruptOptions = {}): Promise<CorruptedPair> {
  if (tokens.length === 0) {
    throw new GenforgeCliError("cannot corrupt an empty token sequence", -1, "");
  }
  if (tokens.some((token) => /\s/.test(token) || token === "")) {
    throw new GenforgeCliError(
      "tokens must be nonempty and free of whitespace", -1, "");
  }
  return withScratchDir(async (dir) => {
    const dataPath = join(dir, "data.jsonl");
    const text = tokens.join(" ");
    await writeJsonl(dataPath, [{ id: "r0", source: text, target: text }]);
    const args = ["corrupt", "--dataset", dataPath];
    if (options.objective) args.push("--objective", options.objective);
    if (options.maskRatio !== undefined) {
      args.push("--mask-ratio", String(options.maskRatio));
    }
    if (options.meanSpan !== undefined) {
      args.push("--mean-span", String(options.meanSpan));
    }
    if (options.permuteSentences) args.push("--permute-sentences");
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    const row = JSON.parse(await runGenforge(args));
    return { input: row.input, target: row.target, plan: row.plan };
  });
}

/**
 * Pooled n-gram overlap between hypotheses and their sources, for n = 1..4.
 * 1.0 means every hypothesis n-gram also appears in its source; null means
 * no hypothesis was long enough to form an n-gram.
 */
export async function copyRateProfile(
  hypotheses: string[], sources: string[],
): Promise<Scores> {
  if (hypotheses.length !== sources.length) {
    throw new GenforgeCliError(
      `got ${hypotheses.length} hypotheses for ${sources.length} sources`,
      -1, "");
  }
  return withScratchDir(async (dir) => {
    const dataPath = join(dir, "data.jsonl");
    const hypPath = join(dir, "hyps.jsonl");
    await writeJsonl(dataPath, sources.map((source, i) => ({
      id: `h${i}`, source, target: source,
    })));
    await writeJsonl(hypPath, hypotheses.map((hypothesis, i) => ({
      id: `h${i}`, hypothesis,
    })));
    const report = JSON.parse(await runGenforge([
      "analyze", "--hyp", hypPath, "--hyp2", hypPath,
      "--dataset", dataPath, "--metric", "rouge-1", "--format", "json",
    ]));
    return report.comparison.copy_rate_a as Scores;
  });
}
