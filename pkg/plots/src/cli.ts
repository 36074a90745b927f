#!/usr/bin/env node
/**
 * Command line: larsim-plots --csv sweep.csv --family density
 *               --metric delivery_pct --out figure.svg [--protocols a,b]
 */

import { parseArgs } from "node:util";
import { CsvError, Metric } from "./csv.js";
import { FAMILIES, Family, METRICS, render } from "./figure.js";

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        family: { type: "string" },
        metric: { type: "string" },
        out: { type: "string" },
        protocols: { type: "string" },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  const { csv, family, metric, out, protocols } = values;
  if (!csv || !family || !metric || !out) {
    console.error(
      "usage: larsim-plots --csv PATH --family {density|malicious|speed} " +
        "--metric {delivery_pct|avg_delay_ms} --out PATH.svg [--protocols a,b]",
    );
    return 2;
  }
  if (!(FAMILIES as readonly string[]).includes(family)) {
    console.error(`error: unknown family '${family}'; valid: ${FAMILIES.join(", ")}`);
    return 2;
  }
  if (!(METRICS as string[]).includes(metric)) {
    console.error(`error: unknown metric '${metric}'; valid: ${METRICS.join(", ")}`);
    return 2;
  }
  try {
    render({
      family: family as Family,
      metric: metric as Metric,
      csvPath: csv,
      outPath: out,
      protocols: protocols ? protocols.split(",").map((p) => p.trim()) : undefined,
    });
  } catch (err) {
    if (err instanceof CsvError || (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
