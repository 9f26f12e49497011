// End-to-end acceptance: drives a real service process through the same
// client and session model the page uses. Requires the Python package to
// be installed (the `mitolr` entry point must be on PATH).

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { formatLrRounded, formatProbability } from "../src/format.js";
import { SessionModel } from "../src/state.js";
import type { LrReport } from "../src/types.js";

const REPO_ROOT = resolve(__dirname, "..", "..");
const DATA_DIR = join(REPO_ROOT, "tests", "data");
const PORT = 20000 + (process.pid % 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess | undefined;
let tempDir: string | undefined;
let client: ApiClient;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20000;
  let lastError: unknown = new Error("service never polled");
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/sources`);
      if (resp.ok) return;
      lastError = new Error(`HTTP ${resp.status}`);
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolveSleep) => setTimeout(resolveSleep, 150));
  }
  throw new Error(`service did not come up on ${BASE}: ${lastError}`);
}

beforeAll(async () => {
  tempDir = mkdtempSync(join(tmpdir(), "mitolr-ui-e2e-"));
  const config = {
    snv_sources: [{
      name: "demo",
      snv: join(DATA_DIR, "demo_snv.tsv"),
      sizes: join(DATA_DIR, "demo_sizes.tsv"),
    }],
    tlhg_distribution: { weights_file: join(DATA_DIR, "demo_weights.tsv") },
  };
  const configPath = join(tempDir, "config.json");
  writeFileSync(configPath, JSON.stringify(config));
  proc = spawn("mitolr",
    ["--config", configPath, "serve", "--port", String(PORT)],
    { stdio: ["ignore", "pipe", "pipe"] });
  proc.on("error", () => { /* surfaced by waitForService */ });
  await waitForService();
  client = new ApiClient(BASE);
}, 30000);

afterAll(() => {
  proc?.kill("SIGTERM");
  if (tempDir) rmSync(tempDir, { recursive: true, force: true });
});

const PROFILE = readFileSync(
  join(DATA_DIR, "demo_profile.txt"), "utf8").trim();

describe("worked-example flow", () => {
  it("shows LR 20 for the classified TLHG and 25 under override A1",
    async () => {
      const model = new SessionModel();
      model.profileText = PROFILE;

      const first = await client.lr(model.buildLrRequest());
      const report = first.body as LrReport;
      expect(report.tlhg_used).toBe("A");
      expect(report.lr).toBe(20.0);
      expect(formatLrRounded(report.lr)).toBe("20");
      model.addHistory(model.buildLrRequest(), first.raw);

      model.tlhgOverride = "A1";
      const second = await client.lr(model.buildLrRequest());
      const overridden = second.body as LrReport;
      expect(overridden.tlhg_used).toBe("A1");
      expect(overridden.rank_used).toBe("override");
      expect(overridden.lr).toBe(25.0);
      expect(formatLrRounded(overridden.lr)).toBe("25");
      expect(overridden.lr).toBeGreaterThanOrEqual(report.lr);
    }, 15000);

  it("classifies the profile as TLHG A", async () => {
    const prediction = await client.classify({ profile: PROFILE });
    expect(prediction.body.rank1).toBe("A");
  }, 15000);
});

describe("custom distribution flow", () => {
  it("normalizes weights {A:4,B:1} to 0.8/0.2 and applies the session",
    async () => {
      const upload = await client.uploadDistribution({ A: 4, B: 1 });
      expect(upload.body.distribution.probs).toEqual({ A: 0.8, B: 0.2 });
      expect(formatProbability(upload.body.distribution.probs["A"]!))
        .toBe("0.8");

      const fetched = await client.getDistribution(upload.body.session);
      expect(fetched.body.probs).toEqual({ A: 0.8, B: 0.2 });

      // the uploaded prior changes the LR: P(A)=0.8 instead of 0.5
      const model = new SessionModel();
      model.profileText = PROFILE;
      model.distributionSession = upload.body.session;
      const report = (await client.lr(model.buildLrRequest()))
        .body as LrReport;
      expect(report.tlhg_prob).toBe(0.8);
      expect(report.lr).toBeCloseTo(12.5, 12);
    }, 15000);

  it("rejects a negative weight with a named error", async () => {
    await expect(client.uploadDistribution({ A: -1 })).rejects.toMatchObject(
      { code: "domain_error" });
  }, 15000);
});

describe("history byte-identity", () => {
  it("re-running a snapshot returns the exact same bytes", async () => {
    const model = new SessionModel();
    model.profileText = PROFILE;
    const request = model.buildLrRequest();
    const result = await client.lr(request);
    const entry = model.addHistory(request, result.raw);

    const outcome = await model.rerun(entry, client);
    expect(outcome.identical).toBe(true);
    expect(outcome.responseText).toBe(entry.responseText);
  }, 15000);

  it("a different prior produces different bytes for the same profile",
    async () => {
      const model = new SessionModel();
      model.profileText = PROFILE;
      const request = model.buildLrRequest();
      const entry = model.addHistory(request, (await client.lr(request)).raw);

      const upload = await client.uploadDistribution({ A: 4, B: 1 });
      model.distributionSession = upload.body.session;
      const shifted = await client.lr(model.buildLrRequest());
      expect(shifted.raw).not.toBe(entry.responseText);

      // original snapshot still replays byte-identically
      const replay = await model.rerun(entry, client);
      expect(replay.identical).toBe(true);
    }, 15000);
});
