/** Global test setup: start the real session service and produce an
 * engine-only duel transcript to replay against. */

import { spawn, execFileSync, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import type { TestProject } from "vitest/node";

const REPO_ROOT = resolve(__dirname, "..", "..");

let server: ChildProcess;

async function waitForService(base: string): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const resp = await fetch(`${base}/strategies`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error(`service at ${base} did not come up`);
}

export default async function setup(project: TestProject): Promise<() => void> {
  const port = 8900 + (process.pid % 500);
  const base = `http://127.0.0.1:${port}`;
  server = spawn("python3", ["-m", "revspy", "serve", "--port", String(port)], {
    cwd: REPO_ROOT,
    stdio: "ignore",
  });
  await waitForService(base);

  const dir = mkdtempSync(join(tmpdir(), "revspy-ui-"));
  const fixturePath = join(dir, "duel.json");
  execFileSync(
    "python3",
    [
      "-m", "revspy", "duel",
      "--graph", "bipartite:12,12",
      "--m", "2", "--r", "6", "--s", "3",
      "--rev", "rev.bipartite-m2",
      "--spy", "spy.bipartite-m2",
      "--seed", "9", "--horizon", "20",
      "--out", fixturePath,
    ],
    { cwd: REPO_ROOT },
  );
  const fixture = readFileSync(fixturePath, "utf-8");

  project.provide("serviceBase", base);
  project.provide("engineTranscript", fixture);
  return () => {
    server.kill();
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    serviceBase: string;
    engineTranscript: string;
  }
}
