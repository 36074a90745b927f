import { describe, expect, it } from "vitest";
import { aggregate, parseSweepCsv, protocolsIn, CsvError } from "../src/csv.js";

const HEADER =
  "family,sweep_value,protocol,seed,nodes,malicious,speed,sent,delivered," +
  "delivery_pct,avg_delay_ms,mitm_detections,rediscoveries";

function csv(rows: string[]): string {
  return [HEADER, ...rows].join("\n");
}

describe("parseSweepCsv", () => {
  it("parses rows and blank delays", () => {
    const rows = parseSweepCsv(
      csv([
        "density,10,dlar,0,10,1,5,500,400,80.0,3.25,0,2",
        "density,10,dlar,1,10,1,5,480,0,0.0,,0,19",
      ]),
    );
    expect(rows).toHaveLength(2);
    expect(rows[0].delivery_pct).toBe(80.0);
    expect(rows[0].avg_delay_ms).toBe(3.25);
    expect(rows[1].avg_delay_ms).toBeNull();
  });

  it("rejects a missing column", () => {
    const noDelay = HEADER.replace(",avg_delay_ms", "");
    expect(() => parseSweepCsv([noDelay, "density,10,dlar,0,10,1,5,500,400,80.0,0,2"].join("\n")))
      .toThrow(CsvError);
  });

  it("rejects an empty csv", () => {
    expect(() => parseSweepCsv(HEADER)).toThrow(/no data rows/);
  });
});

describe("aggregate", () => {
  const rows = parseSweepCsv(
    csv([
      "density,10,dlar,0,10,1,5,500,400,80.0,4.0,0,0",
      "density,10,dlar,1,10,1,5,500,300,60.0,2.0,0,0",
      "density,20,dlar,0,20,2,5,500,450,90.0,3.0,0,0",
      "density,10,rlar,0,10,1,5,500,100,20.0,9.0,0,0",
      "speed,10,dlar,0,40,4,10,500,250,50.0,5.0,0,0",
    ]),
  );

  it("averages over seeds per sweep value", () => {
    const series = aggregate(rows, "density", "dlar", "delivery_pct");
    expect(series).toEqual([
      { sweepValue: 10, mean: 70.0, seeds: 2 },
      { sweepValue: 20, mean: 90.0, seeds: 1 },
    ]);
  });

  it("keeps families and protocols apart", () => {
    expect(aggregate(rows, "speed", "dlar", "delivery_pct")).toEqual([
      { sweepValue: 10, mean: 50.0, seeds: 1 },
    ]);
    expect(aggregate(rows, "density", "rlar", "avg_delay_ms")).toEqual([
      { sweepValue: 10, mean: 9.0, seeds: 1 },
    ]);
  });

  it("skips rows with no delay when averaging delay", () => {
    const withEmpty = parseSweepCsv(
      csv([
        "density,10,dlar,0,10,1,5,500,400,80.0,4.0,0,0",
        "density,10,dlar,1,10,1,5,500,0,0.0,,0,0",
      ]),
    );
    expect(aggregate(withEmpty, "density", "dlar", "avg_delay_ms")).toEqual([
      { sweepValue: 10, mean: 4.0, seeds: 1 },
    ]);
  });

  it("lists protocols present in a family", () => {
    expect(protocolsIn(rows, "density")).toEqual(["dlar", "rlar"]);
  });
});
