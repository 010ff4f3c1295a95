export { BoundTransform, outputLabels } from "./transform.js";
export type { NodeLabel, TransformConfig, TransformMode } from "./transform.js";
export { smape } from "./smape.js";
export { resolveCliCommand, runCli } from "./cli.js";
export type { CliResult } from "./cli.js";
