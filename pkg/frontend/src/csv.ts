/**
 * Parsers for the two CSV schemas the simulation harness emits.
 *
 * Record files carry one Monte Carlo outcome per row:
 *   scenario,scheme,sweep_value,K,trial,rate_bpshz,erank_e2e,erank_dir,wall_time_ms[,status]
 * Mode files carry one reflecting cell per row:
 *   x,y,abs_1,phase_1,...,abs_k,phase_k
 */

export interface ExperimentRecord {
  scenario: string;
  scheme: string;
  sweepValue: number;
  k: number;
  trial: number;
  rate: number;
  erankE2e: number;
  erankDir: number;
  status: string;
}

export interface ModesTable {
  /** cell coordinates in meters */
  x: number[];
  y: number[];
  /** per mode: |w_i| over cells */
  magnitudes: number[][];
  /** per mode: arg(w_i)/pi over cells, in [-1, 1] */
  phases: number[][];
}

const RECORD_HEADER = [
  "scenario",
  "scheme",
  "sweep_value",
  "K",
  "trial",
  "rate_bpshz",
  "erank_e2e",
  "erank_dir",
  "wall_time_ms",
];

function splitLines(text: string): string[] {
  return text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}

function parseNumber(token: string, where: string): number {
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new Error(`${where}: expected a number, got "${token}"`);
  }
  return value;
}

export function parseRecords(text: string): ExperimentRecord[] {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new Error("records CSV is empty");
  }
  const header = lines[0].split(",");
  const base = header.slice(0, RECORD_HEADER.length);
  if (base.join(",") !== RECORD_HEADER.join(",")) {
    throw new Error(
      `unexpected records header: "${lines[0]}" (want it to start with "${RECORD_HEADER.join(",")}")`,
    );
  }
  const hasStatus = header.length === RECORD_HEADER.length + 1 && header[9] === "status";
  if (header.length > RECORD_HEADER.length && !hasStatus) {
    throw new Error(`unexpected trailing columns in header: "${lines[0]}"`);
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    const want = RECORD_HEADER.length + (hasStatus ? 1 : 0);
    if (parts.length !== want) {
      throw new Error(`row ${i + 1}: expected ${want} columns, got ${parts.length}`);
    }
    const where = `row ${i + 1}`;
    return {
      scenario: parts[0],
      scheme: parts[1],
      sweepValue: parseNumber(parts[2], where),
      k: parseNumber(parts[3], where),
      trial: parseNumber(parts[4], where),
      rate: parseNumber(parts[5], where),
      erankE2e: parseNumber(parts[6], where),
      erankDir: parseNumber(parts[7], where),
      status: hasStatus ? parts[9] : "ok",
    };
  });
}

export function parseModes(text: string): ModesTable {
  const lines = splitLines(text);
  if (lines.length < 2) {
    throw new Error("modes CSV needs a header and at least one cell row");
  }
  const header = lines[0].split(",");
  if (header[0] !== "x" || header[1] !== "y") {
    throw new Error(`unexpected modes header: "${lines[0]}"`);
  }
  const modeCount = (header.length - 2) / 2;
  if (!Number.isInteger(modeCount) || modeCount < 1) {
    throw new Error(`modes header must carry abs/phase column pairs, got ${header.length} columns`);
  }
  for (let m = 0; m < modeCount; m++) {
    if (header[2 + 2 * m] !== `abs_${m + 1}` || header[3 + 2 * m] !== `phase_${m + 1}`) {
      throw new Error(`unexpected mode columns at position ${2 + 2 * m}: "${lines[0]}"`);
    }
  }
  const table: ModesTable = {
    x: [],
    y: [],
    magnitudes: Array.from({ length: modeCount }, () => []),
    phases: Array.from({ length: modeCount }, () => []),
  };
  lines.slice(1).forEach((line, i) => {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new Error(`row ${i + 1}: expected ${header.length} columns, got ${parts.length}`);
    }
    const where = `row ${i + 1}`;
    table.x.push(parseNumber(parts[0], where));
    table.y.push(parseNumber(parts[1], where));
    for (let m = 0; m < modeCount; m++) {
      table.magnitudes[m].push(parseNumber(parts[2 + 2 * m], where));
      table.phases[m].push(parseNumber(parts[3 + 2 * m], where));
    }
  });
  return table;
}
