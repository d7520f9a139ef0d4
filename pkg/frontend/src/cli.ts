/**
 * risholo-plot: render harness CSV files as SVG figures.
 *
 * Usage:
 *   risholo-plot --spec figure.json
 *   risholo-plot --kind rate_vs_n --input out.csv --out fig.svg [--scheme s] [--k 1]
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { aggregate } from "./aggregate.js";
import { parseModes, parseRecords } from "./csv.js";
import { CURVE_STYLES, renderCurves, renderModes } from "./figures.js";
import { FigureSpec, SeriesSelection, validateSpec } from "./spec.js";

function parseArgs(argv: string[]): FigureSpec {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near "${key}"`);
    }
    flags.set(key.slice(2), value);
  }
  if (flags.has("spec")) {
    return validateSpec(JSON.parse(readFileSync(flags.get("spec")!, "utf-8")));
  }
  const selection: SeriesSelection = {};
  if (flags.has("scheme")) selection.scheme = flags.get("scheme")!;
  if (flags.has("k")) selection.k = Number(flags.get("k")!);
  const raw: Record<string, unknown> = {
    kind: flags.get("kind"),
    input: flags.get("input"),
    output: flags.get("out") ?? flags.get("output"),
  };
  if (selection.scheme !== undefined || selection.k !== undefined) {
    raw.series = [selection];
  }
  if (flags.has("modes")) raw.modes = Number(flags.get("modes")!);
  return validateSpec(raw);
}

export function run(argv: string[]): void {
  const spec = parseArgs(argv);
  const text = readFileSync(spec.input, "utf-8");
  let svg: string;
  if (spec.kind === "modes") {
    svg = renderModes(parseModes(text), spec.modes);
  } else {
    const metric = spec.kind === "rate_vs_n" ? "rate" : "erankE2e";
    const series = aggregate(parseRecords(text), metric, spec.series);
    svg = renderCurves(series, CURVE_STYLES[spec.kind]);
  }
  writeFileSync(spec.output, svg + "\n", "utf-8");
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);

if (invokedDirectly) {
  try {
    run(process.argv.slice(2));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(2);
  }
}
