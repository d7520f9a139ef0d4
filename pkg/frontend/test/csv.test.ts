import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseModes, parseRecords } from "../src/csv.js";

const RECORDS = readFileSync(new URL("./fixtures/rate_records.csv", import.meta.url), "utf-8");
const MODES = readFileSync(new URL("./fixtures/modes_d6.csv", import.meta.url), "utf-8");

describe("parseRecords", () => {
  it("reads every data row of the harness output", () => {
    const records = parseRecords(RECORDS);
    expect(records).toHaveLength(64);
    expect(records[0].scenario).toBe("frontend_fixture");
    expect(new Set(records.map((r) => r.scheme))).toEqual(
      new Set(["location_focus", "far_field"]),
    );
  });

  it("keeps numeric fields numeric", () => {
    const records = parseRecords(RECORDS);
    for (const r of records) {
      expect(Number.isFinite(r.rate)).toBe(true);
      expect(r.rate).toBeGreaterThanOrEqual(0);
      expect(r.erankE2e).toBeGreaterThanOrEqual(1);
    }
  });

  it("accepts the status-column schema variant", () => {
    const text = [
      "scenario,scheme,sweep_value,K,trial,rate_bpshz,erank_e2e,erank_dir,wall_time_ms,status",
      "s,perfect_csi,4,1,0,2.5,1.5,0,0,max_iter",
    ].join("\n");
    const records = parseRecords(text);
    expect(records[0].status).toBe("max_iter");
  });

  it("rejects a foreign header", () => {
    expect(() => parseRecords("a,b,c\n1,2,3")).toThrow(/unexpected records header/);
  });

  it("rejects a short row", () => {
    const bad = RECORDS.split("\n").slice(0, 2).join("\n") + "\ns,x,1,1,0";
    expect(() => parseRecords(bad)).toThrow(/columns/);
  });

  it("rejects non-numeric fields", () => {
    const lines = RECORDS.split("\n");
    const broken = lines[1].replace(/,[^,]*$/, ",NOPE").split(",");
    broken[5] = "NOPE";
    expect(() => parseRecords(lines[0] + "\n" + broken.join(","))).toThrow(/number/);
  });
});

describe("parseModes", () => {
  it("reads the full cell grid", () => {
    const table = parseModes(MODES);
    expect(table.x).toHaveLength(2500);
    expect(table.magnitudes).toHaveLength(6);
    expect(table.phases).toHaveLength(6);
  });

  it("phases stay in units of pi", () => {
    const table = parseModes(MODES);
    for (const column of table.phases) {
      expect(Math.min(...column)).toBeGreaterThanOrEqual(-1);
      expect(Math.max(...column)).toBeLessThanOrEqual(1);
    }
  });

  it("rejects mislabeled mode columns", () => {
    expect(() => parseModes("x,y,abs_1,phase_2\n0,0,1,0")).toThrow(/mode columns/);
  });

  it("rejects a header without coordinates", () => {
    expect(() => parseModes("u,v,abs_1,phase_1\n0,0,1,0")).toThrow(/modes header/);
  });
});
