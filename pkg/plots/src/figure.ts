/**
 * Figure assembly: pick a family and metric out of a sweep CSV and draw
 * one seed-averaged line per protocol.
 */

import { writeFileSync } from "node:fs";
import { aggregate, loadSweepCsv, protocolsIn, CsvError, Metric, SweepRow } from "./csv.js";
import { renderLineChart, Series } from "./chart.js";

export const FAMILIES = ["density", "malicious", "speed"] as const;
export type Family = (typeof FAMILIES)[number];

export const METRICS: Metric[] = ["delivery_pct", "avg_delay_ms"];

const X_LABELS: Record<Family, string> = {
  density: "number of nodes",
  malicious: "number of malicious nodes",
  speed: "node speed (units/sec)",
};

const Y_LABELS: Record<Metric, string> = {
  delivery_pct: "data delivery (%)",
  avg_delay_ms: "average total packet delay (ms)",
};

export interface FigureSpec {
  family: Family;
  metric: Metric;
  csvPath: string;
  outPath: string;
  protocols?: string[];
}

export function buildSeries(rows: SweepRow[], spec: FigureSpec): Series[] {
  const protocols = spec.protocols ?? protocolsIn(rows, spec.family);
  const series: Series[] = [];
  for (const protocol of protocols) {
    const points = aggregate(rows, spec.family, protocol, spec.metric).map((p) => ({
      x: p.sweepValue,
      y: p.mean,
    }));
    if (points.length > 0) {
      series.push({ label: protocol, points });
    }
  }
  if (series.length === 0) {
    throw new CsvError(
      `no data for family '${spec.family}' and metric '${spec.metric}' in ${spec.csvPath}`,
    );
  }
  return series;
}

/** Render one figure; returns the SVG text that was written. */
export function render(spec: FigureSpec): string {
  const rows = loadSweepCsv(spec.csvPath);
  const series = buildSeries(rows, spec);
  const svg = renderLineChart(series, {
    title: `${Y_LABELS[spec.metric]} vs ${X_LABELS[spec.family]}`,
    xLabel: X_LABELS[spec.family],
    yLabel: Y_LABELS[spec.metric],
  });
  writeFileSync(spec.outPath, svg);
  return svg;
}
