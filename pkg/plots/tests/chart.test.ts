import { describe, expect, it } from "vitest";
import { renderLineChart } from "../src/chart.js";

const series = [
  { label: "dlar", points: [{ x: 10, y: 50 }, { x: 20, y: 60 }] },
  { label: "secure_dlar", points: [{ x: 10, y: 80 }, { x: 20, y: 90 }] },
];

describe("renderLineChart", () => {
  it("draws one polyline per series with a legend", () => {
    const svg = renderLineChart(series, { title: "t", xLabel: "x", yLabel: "y" });
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain(">dlar</text>");
    expect(svg).toContain(">secure_dlar</text>");
  });

  it("embeds the plotted values losslessly", () => {
    const svg = renderLineChart(series, { title: "t", xLabel: "x", yLabel: "y" });
    const desc = svg.match(/<desc>(.*)<\/desc>/s);
    expect(desc).not.toBeNull();
    const payload = JSON.parse(
      desc![1].replace(/&quot;/g, '"').replace(/&lt;/g, "<").replace(/&gt;/g, ">").replace(/&amp;/g, "&"),
    );
    expect(payload.series).toEqual(series);
  });

  it("maps y values linearly onto the pixel grid", () => {
    const svg = renderLineChart(series, { title: "t", xLabel: "x", yLabel: "y" });
    const lines = [...svg.matchAll(/<polyline[^>]*points="([^"]+)"/g)].map((m) => m[1]);
    const coords = lines.map((pts) => pts.split(" ").map((p) => p.split(",").map(Number)));
    // Equal x positions across series; higher value sits higher (smaller y).
    expect(coords[0][0][0]).toBeCloseTo(coords[1][0][0], 5);
    expect(coords[1][0][1]).toBeLessThan(coords[0][0][1]);
    // Linearity: pixel distance ratio matches value ratio (50->60 vs 80->90).
    const d1 = coords[0][0][1] - coords[0][1][1];
    const d2 = coords[1][0][1] - coords[1][1][1];
    expect(d1).toBeCloseTo(d2, 1);
  });

  it("rejects an empty plot", () => {
    expect(() => renderLineChart([], { title: "t", xLabel: "x", yLabel: "y" })).toThrow();
  });
});
