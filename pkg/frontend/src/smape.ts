import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli } from "./cli.js";

function toSeriesCsv(values: ArrayLike<number>): string {
  let csv = "t,value\n";
  for (let i = 0; i < values.length; i++) {
    csv += `${i + 1},${values[i]}\n`;
  }
  return csv;
}

/**
 * SMAPE (percent) computed by the native engine; no arithmetic happens on
 * this side, so the result is bit-identical to a native evaluation.
 */
export async function smape(
  pred: ArrayLike<number>,
  actual: ArrayLike<number>,
  options: { minusForm?: boolean } = {},
): Promise<number> {
  const dir = await mkdtemp(join(tmpdir(), "wavestream-smape-"));
  try {
    const predPath = join(dir, "pred.csv");
    const actualPath = join(dir, "actual.csv");
    await writeFile(predPath, toSeriesCsv(pred), "utf8");
    await writeFile(actualPath, toSeriesCsv(actual), "utf8");
    const args = ["smape", "--pred", predPath, "--actual", actualPath];
    if (options.minusForm) args.push("--minus-form");
    const result = await runCli(args);
    if (result.code !== 0) {
      throw new Error(result.stderr.trim() || `smape failed with code ${result.code}`);
    }
    return Number(result.stdout.trim());
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}
