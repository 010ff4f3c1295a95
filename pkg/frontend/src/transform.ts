import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";

import { LineQueue } from "./lines.js";
import { resolveCliCommand } from "./cli.js";

export type TransformMode = "ndwt" | "nwpt";

export interface TransformConfig {
  mode: TransformMode;
  /** Daubechies vanishing-moment number, 1..10. */
  number: number;
  /** Decomposition levels, finest first. */
  levels: number;
  /** Optional ring-buffer budget forwarded to the engine. */
  budget?: number;
}

export type NodeLabel =
  | { level: number; kind: "detail" | "smooth" }
  | { level: number; packet: number };

/** Column labels of one coefficient row, in engine emission order. */
export function outputLabels(config: TransformConfig): NodeLabel[] {
  const labels: NodeLabel[] = [];
  if (config.mode === "ndwt") {
    for (let lev = 1; lev <= config.levels; lev++) {
      labels.push({ level: lev, kind: "detail" });
      labels.push({ level: lev, kind: "smooth" });
    }
  } else {
    for (let lev = 1; lev <= config.levels; lev++) {
      for (let p = 0; p < 1 << lev; p++) labels.push({ level: lev, packet: p });
    }
  }
  return labels;
}

/**
 * Streaming handle to the native transform engine.
 *
 * Spawns `... transform --input -` and speaks its line protocol: each push
 * writes one `t,value` line and reads exactly one coefficient row per
 * configured node.  No numeric work happens on this side; values are the
 * engine's own 17-significant-digit output, which round-trips float64
 * exactly.  One instance is a single sequential stream; do not interleave
 * concurrent pushes.
 */
export class BoundTransform {
  readonly config: TransformConfig;
  readonly labels: NodeLabel[];
  private child: ChildProcessWithoutNullStreams;
  private out = new LineQueue();
  private errText = "";
  private headerDone: Promise<void>;
  private t = 0;
  private chain: Promise<unknown> = Promise.resolve();

  constructor(config: TransformConfig) {
    if (config.mode !== "ndwt" && config.mode !== "nwpt") {
      throw new Error(`bad mode ${String(config.mode)}`);
    }
    if (!Number.isInteger(config.levels) || config.levels < 1) {
      throw new Error("levels must be a positive integer");
    }
    this.config = { ...config };
    this.labels = outputLabels(config);

    const [cmd, ...base] = resolveCliCommand();
    const args = [
      ...base, "transform", "--input", "-",
      "--mode", config.mode,
      "--number", String(config.number),
      "--levels", String(config.levels),
    ];
    if (config.budget !== undefined) args.push("--budget", String(config.budget));
    this.child = spawn(cmd, args, { stdio: ["pipe", "pipe", "pipe"] });
    this.child.stdout.setEncoding("utf8");
    this.child.stderr.setEncoding("utf8");
    this.child.stdout.on("data", (chunk: string) => this.out.feed(chunk));
    this.child.stderr.on("data", (chunk: string) => (this.errText += chunk));
    this.child.on("error", (err) => this.out.fail(new Error(`engine spawn failed: ${err.message}`)));
    this.child.on("close", () => {
      this.out.fail(new Error(this.errText.trim() || "engine exited"));
      this.out.end();
    });

    this.child.stdin.write("t,value\n");
    this.headerDone = this.out.next().then((header) => {
      if (header !== "t,level,packet,kind,value") {
        throw new Error(`unexpected engine header: ${header}`);
      }
    });
  }

  /** Number of coefficients emitted per pushed sample. */
  get outputsPerStep(): number {
    return this.labels.length;
  }

  /** Samples pushed so far. */
  get length(): number {
    return this.t;
  }

  /**
   * Push one sample; resolves to this step's coefficients in label order.
   * Non-finite input is rejected with the state untouched, mirroring the
   * engine's own guard.
   */
  push(value: number): Promise<Float64Array> {
    const result = this.chain.then(() => this.pushNow(value));
    this.chain = result.catch(() => undefined);
    return result;
  }

  private async pushNow(value: number): Promise<Float64Array> {
    if (!Number.isFinite(value)) {
      throw new Error("non-finite sample rejected; state unchanged");
    }
    await this.headerDone;
    this.t += 1;
    this.child.stdin.write(`${this.t},${value}\n`);
    const row = new Float64Array(this.labels.length);
    for (let i = 0; i < row.length; i++) {
      const line = await this.out.next();
      const parts = line.split(",");
      if (parts.length !== 5 || Number(parts[0]) !== this.t) {
        throw new Error(`engine protocol error at t=${this.t}: ${line}`);
      }
      row[i] = Number(parts[4]);
    }
    return row;
  }

  /** Push a block of samples; one coefficient row per sample, in order. */
  async pushBlock(values: ArrayLike<number>): Promise<Float64Array[]> {
    const rows: Float64Array[] = [];
    for (let i = 0; i < values.length; i++) {
      rows.push(await this.push(values[i]));
    }
    return rows;
  }

  /** Close the stream and wait for the engine to exit. */
  close(): Promise<number> {
    return new Promise((resolve) => {
      this.child.once("close", (code) => resolve(code ?? 0));
      this.child.stdin.end();
    });
  }
}
