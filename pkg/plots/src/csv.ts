/**
 * Sweep-CSV loading and seed aggregation.
 *
 * The simulator writes one row per (sweep value, protocol, seed); figures
 * want one point per (sweep value, protocol), averaged over seeds.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "family",
  "sweep_value",
  "protocol",
  "seed",
  "delivery_pct",
  "avg_delay_ms",
] as const;

export type Metric = "delivery_pct" | "avg_delay_ms";

export interface SweepRow {
  family: string;
  sweep_value: number;
  protocol: string;
  seed: number;
  delivery_pct: number;
  avg_delay_ms: number | null;
}

export interface SeriesPoint {
  sweepValue: number;
  mean: number;
  seeds: number;
}

export class CsvError extends Error {}

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new CsvError(`CSV parse failure: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of REQUIRED_COLUMNS) {
    if (!fields.includes(column)) {
      throw new CsvError(`CSV is missing required column '${column}'`);
    }
  }
  if (parsed.data.length === 0) {
    throw new CsvError("CSV contains no data rows");
  }
  return parsed.data.map((raw, index) => {
    const sweepValue = Number(raw.sweep_value);
    const delivery = Number(raw.delivery_pct);
    if (!Number.isFinite(sweepValue) || !Number.isFinite(delivery)) {
      throw new CsvError(`row ${index + 1}: unparseable numeric fields`);
    }
    return {
      family: raw.family,
      sweep_value: sweepValue,
      protocol: raw.protocol,
      seed: Number(raw.seed),
      delivery_pct: delivery,
      avg_delay_ms: raw.avg_delay_ms === "" ? null : Number(raw.avg_delay_ms),
    };
  });
}

export function loadSweepCsv(path: string): SweepRow[] {
  return parseSweepCsv(readFileSync(path, "utf8"));
}

/** Seed-averaged series for one protocol: metric mean per sweep value. */
export function aggregate(
  rows: SweepRow[],
  family: string,
  protocol: string,
  metric: Metric,
): SeriesPoint[] {
  const groups = new Map<number, number[]>();
  for (const row of rows) {
    if (row.family !== family || row.protocol !== protocol) continue;
    const value = row[metric];
    if (value === null) continue; // scenarios that delivered nothing
    const bucket = groups.get(row.sweep_value);
    if (bucket) bucket.push(value);
    else groups.set(row.sweep_value, [value]);
  }
  return [...groups.entries()]
    .map(([sweepValue, values]) => ({
      sweepValue,
      mean: values.reduce((a, b) => a + b, 0) / values.length,
      seeds: values.length,
    }))
    .sort((a, b) => a.sweepValue - b.sweepValue);
}

export function protocolsIn(rows: SweepRow[], family: string): string[] {
  const seen = new Set<string>();
  for (const row of rows) {
    if (row.family === family) seen.add(row.protocol);
  }
  return [...seen].sort();
}
