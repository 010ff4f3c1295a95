import { execFile } from "node:child_process";

/**
 * Command used to reach the native engine.  Defaults to the module form so
 * it works in any environment where the Python package is installed;
 * override with the WAVESTREAM_CLI environment variable (whitespace-split,
 * e.g. "wavestream" or "/usr/bin/python3 -m wavestream.cli").
 */
export function resolveCliCommand(): string[] {
  const env = process.env.WAVESTREAM_CLI;
  if (env && env.trim().length > 0) return env.trim().split(/\s+/);
  return ["python3", "-m", "wavestream.cli"];
}

export interface CliResult {
  stdout: string;
  stderr: string;
  code: number;
}

/** Run one CLI subcommand to completion. */
export function runCli(args: string[], stdin?: string): Promise<CliResult> {
  const [cmd, ...base] = resolveCliCommand();
  return new Promise((resolve, reject) => {
    const child = execFile(
      cmd,
      [...base, ...args],
      { maxBuffer: 1 << 28 },
      (error, stdout, stderr) => {
        if (error && (error as NodeJS.ErrnoException).code === "ENOENT") {
          reject(new Error(`cannot launch native engine: ${cmd} not found`));
          return;
        }
        const code = error ? (typeof (error as any).code === "number" ? (error as any).code : 1) : 0;
        resolve({ stdout, stderr, code });
      },
    );
    if (stdin !== undefined) {
      child.stdin?.write(stdin);
    }
    child.stdin?.end();
  });
}
