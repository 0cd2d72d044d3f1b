/**
 * Node bindings for the tabeval table-extraction evaluation toolkit.
 *
 * Every call spawns the installed Python package through a one-shot JSON
 * bridge, so this layer holds no metric logic and cannot drift from it.
 * Wire shapes keep the Python side's snake_case field names verbatim; only
 * the function names are camelCased.
 *
 * Requires `tabeval` importable by `python3` (or by the interpreter named
 * in TABEVAL_PYTHON).
 */

import { spawnSync } from "node:child_process";
import { fileURLToPath } from "node:url";

const BRIDGE = fileURLToPath(new URL("../py/bridge.py", import.meta.url));

/** Raised for any failure on the Python side; `name` is the Python
 *  exception type and `message` its exact text. */
export class TabevalError extends Error {
  constructor(pyType: string, message: string) {
    super(message);
    this.name = pyType;
  }
}

interface BridgeResponse {
  ok: boolean;
  value?: unknown;
  error?: { type: string; message: string };
}

function call<T>(op: string, args: Record<string, unknown>): T {
  const python = process.env.TABEVAL_PYTHON ?? "python3";
  const proc = spawnSync(python, [BRIDGE], {
    input: JSON.stringify({ op, args }),
    encoding: "utf8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (proc.error) {
    throw proc.error;
  }
  if (proc.status !== 0) {
    throw new TabevalError(
      "BridgeError",
      `bridge exited with status ${proc.status}: ${proc.stderr.trim()}`,
    );
  }
  let response: BridgeResponse;
  try {
    response = JSON.parse(proc.stdout) as BridgeResponse;
  } catch {
    throw new TabevalError(
      "BridgeError",
      `bridge wrote no JSON: ${proc.stdout.slice(0, 200)}`,
    );
  }
  if (!response.ok) {
    const detail = response.error ?? { type: "BridgeError", message: "no detail" };
    throw new TabevalError(detail.type, detail.message);
  }
  return response.value as T;
}

export interface PairScores {
  teds: number;
  grits_topology: number;
  grits_content: number;
}

/** Evaluation parameters; omitted keys take the toolkit defaults. */
export interface RunConfig {
  mode?: "bbox" | "content";
  theta_j?: number;
  theta_c?: number | null;
  density?: 0.0 | 0.5;
  bins?: number;
  weighting?: "topology" | "content" | "teds";
}

/** The report summary document, shaped exactly like the CLI's summary.json. */
export interface BoundReport {
  config: {
    mode: string;
    theta_j: number;
    theta_c: number | null;
    density: number;
    bins: number;
    weighting: string;
  };
  counts: Record<string, number>;
  detection: Record<string, unknown>;
  tsr: Record<string, unknown>;
  te: Record<string, unknown> | null;
  macro: Record<string, number | null> | null;
  warnings: string[];
}

export interface TableEntry {
  bbox: [number, number, number, number] | null;
  markup: string | null;
  confidence: number;
}

export interface PageRecord {
  page_id: string;
  width: number;
  height: number;
  ground_truth: TableEntry[];
  predictions: TableEntry[];
  tokens: { bbox: [number, number, number, number]; text: string }[];
  warnings: string[];
}

export interface ReliabilityBin {
  lo: number;
  hi: number;
  count: number;
  mean_confidence: number;
  precision: number;
}

export interface PRPoint {
  theta_c: number;
  precision: number;
  recall: number;
}

/** Version of the underlying toolkit; this package mirrors it. */
export function version(): string {
  return call("version", {});
}

/**
 * Structure similarity of a ground-truth/prediction markup pair under all
 * three weightings. Parse failures throw with the parser's message.
 */
export function scorePair(gtMarkup: string, predMarkup: string): PairScores {
  return call("score_pair", { gt_markup: gtMarkup, pred_markup: predMarkup });
}

/** Run the full evaluation over a JSON Lines corpus file. */
export function evaluateCorpus(path: string, config: RunConfig = {}): BoundReport {
  return call("evaluate_corpus", { path, config });
}

/** Load and validate a corpus file without scoring it. */
export function loadCorpus(path: string): PageRecord[] {
  return call("load_corpus", { path });
}

/** Tree edit similarity between two table markups. */
export function teds(a: string, b: string): number {
  return call("teds", { a, b });
}

/** Grid similarity over cell span layout. */
export function gritsTopology(a: string, b: string): number {
  return call("grits_topology", { a, b });
}

/** Grid similarity over cell text. */
export function gritsContent(a: string, b: string): number {
  return call("grits_content", { a, b });
}

/** Chunk-pair overlap of the flattened cell text of two table markups. */
export function contentJaccard(a: string, b: string): number {
  return call("content_jaccard", { a, b });
}

/** Probability that match quality j clears a random threshold drawn from
 *  the density supported on [s, 1]. */
export function expectedIndicator(j: number, s = 0.5): number {
  return call("expected_indicator", { j, s });
}

/** Detection calibration error over equal-width confidence bins. */
export function dEce(
  predictions: [number, boolean][],
  bins = 10,
): { score: number; bins: ReliabilityBin[] } {
  return call("d_ece", { predictions, bins });
}

/** Step-sum average precision of a precision/recall curve. */
export function averagePrecision(points: PRPoint[]): number {
  return call("average_precision", { points });
}
