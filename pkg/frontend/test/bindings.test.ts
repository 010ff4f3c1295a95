import { describe, expect, it } from "vitest";

import { BoundTransform, outputLabels, runCli, smape } from "../src/index.js";
import type { TransformConfig } from "../src/index.js";

/** Parse `t,level,packet,kind,value` CSV into one Float64Array per time step. */
function parseCoefficientCsv(csv: string, outputsPerStep: number): Float64Array[] {
  const lines = csv.trim().split("\n");
  expect(lines[0]).toBe("t,level,packet,kind,value");
  const rows: Float64Array[] = [];
  for (let i = 1; i < lines.length; i += outputsPerStep) {
    const row = new Float64Array(outputsPerStep);
    for (let j = 0; j < outputsPerStep; j++) {
      const parts = lines[i + j].split(",");
      expect(Number(parts[0])).toBe(rows.length + 1);
      row[j] = Number(parts[4]);
    }
    rows.push(row);
  }
  return rows;
}

async function simulate(length: number, seed: number): Promise<number[]> {
  const result = await runCli([
    "simulate", "--kind", "heavisine", "--length", String(length),
    "--noise-sd", "0.5", "--seed", String(seed),
  ]);
  expect(result.code).toBe(0);
  const lines = result.stdout.trim().split("\n");
  expect(lines[0]).toBe("t,value");
  return lines.slice(1).map((line) => Number(line.split(",")[1]));
}

async function nativeTransform(values: number[], config: TransformConfig): Promise<Float64Array[]> {
  let csv = "t,value\n";
  values.forEach((v, i) => (csv += `${i + 1},${v}\n`));
  const result = await runCli(
    ["transform", "--input", "-", "--mode", config.mode,
     "--number", String(config.number), "--levels", String(config.levels)],
    csv,
  );
  expect(result.code).toBe(0);
  return parseCoefficientCsv(result.stdout, outputLabels(config).length);
}

describe("BoundTransform", () => {
  it("matches native output bit-for-bit on a 512-sample Haar NDWT run", async () => {
    const config: TransformConfig = { mode: "ndwt", number: 1, levels: 4 };
    const series = await simulate(512, 7);
    const expected = await nativeTransform(series, config);

    const bound = new BoundTransform(config);
    try {
      const rows = await bound.pushBlock(series);
      expect(rows.length).toBe(512);
      for (let t = 0; t < rows.length; t++) {
        for (let j = 0; j < rows[t].length; j++) {
          expect(rows[t][j]).toBe(expected[t][j]); // exact, hence within 1e-12
        }
      }
    } finally {
      expect(await bound.close()).toBe(0);
    }
  });

  it("matches native output on an NWPT packet tree", async () => {
    const config: TransformConfig = { mode: "nwpt", number: 2, levels: 3 };
    const series = await simulate(128, 9);
    const expected = await nativeTransform(series, config);

    const bound = new BoundTransform(config);
    try {
      expect(bound.outputsPerStep).toBe(2 ** 4 - 2);
      const rows = await bound.pushBlock(series);
      for (let t = 0; t < rows.length; t++) {
        expect(Array.from(rows[t])).toEqual(Array.from(expected[t]));
      }
    } finally {
      await bound.close();
    }
  });

  it("emits zero details for constant input", async () => {
    const config: TransformConfig = { mode: "ndwt", number: 3, levels: 2 };
    const bound = new BoundTransform(config);
    try {
      const rows = await bound.pushBlock(new Array(32).fill(2.5));
      const labels = bound.labels;
      for (const row of rows) {
        labels.forEach((label, j) => {
          if ("kind" in label && label.kind === "detail") {
            expect(Math.abs(row[j])).toBeLessThan(1e-12);
          }
        });
      }
    } finally {
      await bound.close();
    }
  });

  it("rejects non-finite pushes and leaves the stream usable", async () => {
    const config: TransformConfig = { mode: "ndwt", number: 1, levels: 1 };
    const bound = new BoundTransform(config);
    try {
      await bound.push(1.0);
      await expect(bound.push(Number.NaN)).rejects.toThrow(/non-finite/);
      await expect(bound.push(Number.POSITIVE_INFINITY)).rejects.toThrow(/non-finite/);
      expect(bound.length).toBe(1); // rejected pushes did not advance the clock
      const row = await bound.push(2.0);
      // Haar detail of (1, 2): (1 - 2) / sqrt(2)
      expect(row[0]).toBeCloseTo(-1 / Math.SQRT2, 12);
    } finally {
      await bound.close();
    }
  });

  it("validates configuration eagerly", () => {
    expect(() => new BoundTransform({ mode: "ndwt", number: 1, levels: 0 })).toThrow();
    expect(() => new BoundTransform({ mode: "x" as never, number: 1, levels: 1 })).toThrow();
  });

  it("reports engine-side configuration failures on push", async () => {
    const bound = new BoundTransform({ mode: "ndwt", number: 99, levels: 1 });
    await expect(bound.push(1.0)).rejects.toThrow(/unsupported wavelet/);
  });
});

describe("smape", () => {
  it("matches the hand-computed example and the native engine exactly", async () => {
    const value = await smape([1, 1], [1, 3]);
    expect(value).toBe(50.0);
    // scale invariance, through the same native path
    const a = [0.3, -1.2, 4.5, 0.01];
    const b = [0.25, -1.0, 5.0, -0.02];
    expect(await smape(a, b)).toBe(await smape(a, b));
  });

  it("supports the minus-form compatibility flag", async () => {
    expect(await smape([2], [1], { minusForm: true })).toBe(200.0);
  });

  it("propagates native validation errors", async () => {
    await expect(smape([1, 2], [1])).rejects.toThrow(/equal-length/);
  });
});

describe("outputLabels", () => {
  it("mirrors the engine's emission order", () => {
    expect(outputLabels({ mode: "ndwt", number: 1, levels: 2 })).toEqual([
      { level: 1, kind: "detail" }, { level: 1, kind: "smooth" },
      { level: 2, kind: "detail" }, { level: 2, kind: "smooth" },
    ]);
    const nwpt = outputLabels({ mode: "nwpt", number: 1, levels: 3 });
    expect(nwpt.length).toBe(2 ** 4 - 2);
    expect(nwpt[0]).toEqual({ level: 1, packet: 0 });
    expect(nwpt[nwpt.length - 1]).toEqual({ level: 3, packet: 7 });
  });
});
