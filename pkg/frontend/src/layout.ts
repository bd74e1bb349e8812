/** Vertex coordinates per board style, chosen from the served graph
 * metadata: bipartite columns, multipartite sectors, hypercube weight
 * levels, circle fallback. Coordinates are in [0,1] x [0,1]. */

import { BoardGraph } from "./graph.js";

export interface Point {
  x: number;
  y: number;
}

export type LayoutKind = "bipartite" | "multipartite" | "hypercube" | "circle";

export function layoutKind(graph: BoardGraph): LayoutKind {
  if (graph.hypercubeDim !== null) {
    return "hypercube";
  }
  if (graph.partLabels) {
    const parts = Math.max(...graph.partLabels) + 1;
    return parts === 2 ? "bipartite" : "multipartite";
  }
  return "circle";
}

function popcount(v: number): number {
  let c = 0;
  for (let x = v; x > 0; x >>= 1) {
    c += x & 1;
  }
  return c;
}

export function vertexPositions(graph: BoardGraph): Point[] {
  const kind = layoutKind(graph);
  const n = graph.vertexCount;
  if (kind === "bipartite") {
    const labels = graph.partLabels as number[];
    const columns: number[][] = [[], []];
    labels.forEach((part, v) => columns[part].push(v));
    const points = new Array<Point>(n);
    columns.forEach((column, part) => {
      column.forEach((v, i) => {
        points[v] = {
          x: part === 0 ? 0.2 : 0.8,
          y: (i + 1) / (column.length + 1),
        };
      });
    });
    return points;
  }
  if (kind === "multipartite") {
    const labels = graph.partLabels as number[];
    const k = Math.max(...labels) + 1;
    const groups: number[][] = Array.from({ length: k }, () => []);
    labels.forEach((part, v) => groups[part].push(v));
    const points = new Array<Point>(n);
    groups.forEach((group, part) => {
      const angle = (2 * Math.PI * part) / k - Math.PI / 2;
      const cx = 0.5 + 0.33 * Math.cos(angle);
      const cy = 0.5 + 0.33 * Math.sin(angle);
      const rows = Math.ceil(Math.sqrt(group.length));
      group.forEach((v, i) => {
        points[v] = {
          x: cx + 0.2 * ((i % rows) / Math.max(rows - 1, 1) - 0.5),
          y: cy + 0.2 * (Math.floor(i / rows) / Math.max(rows - 1, 1) - 0.5),
        };
      });
    });
    return points;
  }
  if (kind === "hypercube") {
    const d = graph.hypercubeDim as number;
    const byWeight: number[][] = Array.from({ length: d + 1 }, () => []);
    for (let v = 0; v < n; v += 1) {
      byWeight[popcount(v)].push(v);
    }
    const points = new Array<Point>(n);
    byWeight.forEach((level, w) => {
      level.forEach((v, i) => {
        points[v] = {
          x: (i + 1) / (level.length + 1),
          y: (w + 1) / (d + 2),
        };
      });
    });
    return points;
  }
  return Array.from({ length: n }, (_, v) => ({
    x: 0.5 + 0.42 * Math.cos((2 * Math.PI * v) / n - Math.PI / 2),
    y: 0.5 + 0.42 * Math.sin((2 * Math.PI * v) / n - Math.PI / 2),
  }));
}
