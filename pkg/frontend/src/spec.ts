/** Figure description: what to read, which series to keep, where to write. */

export type FigureKind = "rate_vs_n" | "dof_vs_d" | "dof_vs_dris" | "modes";

export interface SeriesSelection {
  scheme?: string;
  k?: number;
}

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  series?: SeriesSelection[];
  /** modes kind only: how many panels to draw (default: all in the CSV) */
  modes?: number;
}

const KINDS: FigureKind[] = ["rate_vs_n", "dof_vs_d", "dof_vs_dris", "modes"];

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("figure spec must be a JSON object");
  }
  const spec = raw as Record<string, unknown>;
  if (typeof spec.kind !== "string" || !KINDS.includes(spec.kind as FigureKind)) {
    throw new Error(`spec.kind must be one of ${KINDS.join(", ")}`);
  }
  if (typeof spec.input !== "string" || spec.input.length === 0) {
    throw new Error("spec.input must be a CSV path");
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new Error("spec.output must be an image path");
  }
  let series: SeriesSelection[] | undefined;
  if (spec.series !== undefined) {
    if (!Array.isArray(spec.series)) {
      throw new Error("spec.series must be an array of {scheme, k} filters");
    }
    series = spec.series.map((entry, i) => {
      if (typeof entry !== "object" || entry === null) {
        throw new Error(`spec.series[${i}] must be an object`);
      }
      const sel = entry as Record<string, unknown>;
      const out: SeriesSelection = {};
      if (sel.scheme !== undefined) {
        if (typeof sel.scheme !== "string") throw new Error(`spec.series[${i}].scheme must be a string`);
        out.scheme = sel.scheme;
      }
      if (sel.k !== undefined) {
        if (typeof sel.k !== "number") throw new Error(`spec.series[${i}].k must be a number`);
        out.k = sel.k;
      }
      return out;
    });
  }
  let modes: number | undefined;
  if (spec.modes !== undefined) {
    if (typeof spec.modes !== "number" || !Number.isInteger(spec.modes) || spec.modes < 1) {
      throw new Error("spec.modes must be a positive integer");
    }
    modes = spec.modes;
  }
  return { kind: spec.kind as FigureKind, input: spec.input, output: spec.output, series, modes };
}
