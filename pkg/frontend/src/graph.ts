/** Parser for the line-oriented graph text carried in session state. */

export interface BoardGraph {
  vertexCount: number;
  adjacency: Set<number>[];
  partLabels: number[] | null;
  hypercubeDim: number | null;
}

export function parseGraphText(text: string): BoardGraph {
  const lines = text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0 || !lines[0].startsWith("n ")) {
    throw new Error("graph text must start with 'n <count>'");
  }
  const n = Number(lines[0].split(/\s+/)[1]);
  let idx = 1;
  let partLabels: number[] | null = null;
  let hypercubeDim: number | null = null;
  if (idx < lines.length && lines[idx].startsWith("parts ")) {
    partLabels = lines[idx].split(/\s+/).slice(1).map(Number);
    idx += 1;
  }
  if (idx < lines.length && lines[idx].startsWith("hypercube ")) {
    hypercubeDim = Number(lines[idx].split(/\s+/)[1]);
    idx += 1;
  }
  const adjacency = Array.from({ length: n }, () => new Set<number>());
  for (; idx < lines.length; idx += 1) {
    const fields = lines[idx].split(/\s+/);
    if (fields[0] !== "e" || fields.length !== 3) {
      throw new Error(`bad edge line: ${lines[idx]}`);
    }
    const u = Number(fields[1]);
    const v = Number(fields[2]);
    if (!(u >= 0 && v > u && v < n)) {
      throw new Error(`edge out of range: ${lines[idx]}`);
    }
    adjacency[u].add(v);
    adjacency[v].add(u);
  }
  return { vertexCount: n, adjacency, partLabels, hypercubeDim };
}

export function hasEdge(g: BoardGraph, u: number, v: number): boolean {
  return u >= 0 && u < g.vertexCount && g.adjacency[u].has(v);
}
