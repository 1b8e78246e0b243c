// End-to-end walkthrough against the real backend: the scripted RHMS
// scenario steps 1-5 must export bytes identical to the committed golden
// file, and import -> export must be a fixed point on real fixtures.

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { buildDocument, finishWizard, loadDocument } from "../src/document.js";
import type { WizardState } from "../src/state.js";
import {
  addActivity,
  addNodeConstraint,
  addParty,
  addSlo,
  canReach,
  connectActivities,
  goToStep,
  initialState,
  setMapping,
  setMetadata,
} from "../src/state.js";
import type {
  ConstraintJson,
  SlaDocumentJson,
  Vocabulary,
} from "../src/types.js";
import { findMetric, unitsForMetric } from "../src/vocab.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO = join(HERE, "..", "..");
const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let api: ApiClient;
let vocab: Vocabulary;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/vocabulary`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("backend did not come up in time");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "slaiot.cli", "serve", "--port",
                             String(PORT)],
                 { cwd: REPO, stdio: "ignore" });
  await waitForServer();
  api = new ApiClient(BASE);
  vocab = await api.vocabulary();
}, 30_000);

afterAll(() => {
  server?.kill("SIGTERM");
});

function constraint(
  metric: string,
  fields: Partial<ConstraintJson>,
): ConstraintJson {
  const info = findMetric(vocab, metric);
  if (!info) throw new Error(`metric ${metric} missing from vocabulary`);
  return { metric: info.name, kind: info.kind, value: 0, ...fields };
}

function addNode(state: WizardState, id: string): WizardState {
  const slot = state.nodes.length;
  const added = addActivity(state, id, id, 40 + slot * 180, 60);
  if (!added.ok) throw new Error(added.reason);
  return added.state;
}

function connect(state: WizardState, from: string, to: string): WizardState {
  const result = connectActivities(state, from, to);
  if (!result.ok) throw new Error(result.reason);
  return result.state;
}

const CAPTURE = "Capture event of interest(EoI)";
const EXAMINE = "Examine the captured (EoI) on fly";
const ANALYZE = "Analyze real-time data";
const STORE = "Store Unstructured Data";

function rhmsWalkthrough(): WizardState {
  // step 1: agreement details, parties, the application SLO
  let state = initialState();
  state = setMetadata(state, {
    id: "rhms-request",
    name: "Remote Health Monitoring Service",
    description: "Consumer requirements for a remote health monitoring pipeline",
    type: "request",
    applicationType: "smart health",
    startDate: "2026-01-01",
    endDate: "2026-12-31",
  });
  state = addParty(state, {
    id: "party-hospital",
    name: "Newcastle Hospital Trust",
    roles: ["End User", "IoT administrator"],
  });
  state = addParty(state, {
    id: "party-cloud",
    name: "Acme Cloud",
    roles: ["Cloud Provider"],
  });
  state = addSlo(state, constraint("Response Time", {
    priority: "high", comparator: "lt", value: 5, unit: "minutes",
  }));
  expect(canReach(state, 2).ok).toBe(true);
  state = goToStep(state, 2);

  // step 2: pick the activities and connect them in sequence
  for (const id of [CAPTURE, EXAMINE, ANALYZE, STORE]) {
    state = addNode(state, id);
  }
  state = connect(state, CAPTURE, EXAMINE);
  state = connect(state, EXAMINE, ANALYZE);
  state = connect(state, ANALYZE, STORE);
  state = goToStep(state, 3);

  // step 3: map every activity (capture/store defaults already fit)
  state = setMapping(state, CAPTURE, "sensing", "iot_device");
  state = setMapping(state, EXAMINE, "ingestion", "edge");
  state = setMapping(state, ANALYZE, "stream_processing", "cloud");
  state = setMapping(state, STORE, "database_nosql", "cloud");
  expect(canReach(state, 4).ok).toBe(true);
  state = goToStep(state, 4);

  // step 4: per-service and per-resource requirements
  state = addNodeConstraint(state, CAPTURE, "service", "slo",
    constraint("Data Freshness",
               { priority: "medium", comparator: "gte", value: 95, unit: "%" }));
  state = addNodeConstraint(state, CAPTURE, "service", "config",
    constraint("Measurement Collection Interval",
               { comparator: "lte", value: 5, unit: "seconds" }));
  state = addNodeConstraint(state, CAPTURE, "resource", "slo",
    constraint("Battery Lifetime",
               { priority: "low", comparator: "gte", value: 24, unit: "hour" }));
  state = addNodeConstraint(state, CAPTURE, "resource", "config",
    constraint("Number of Deployed Sensors",
               { comparator: "gte", value: 3, unit: "unit" }));
  state = addNodeConstraint(state, EXAMINE, "service", "slo",
    constraint("Latency",
               { priority: "high", comparator: "lt", value: 30, unit: "seconds" }));
  state = addNodeConstraint(state, EXAMINE, "service", "config",
    constraint("Delivery Guarantee Mechanism",
               { comparator: "eq", value: "at least once" }));
  state = addNodeConstraint(state, EXAMINE, "resource", "slo",
    constraint("Availability",
               { priority: "medium", comparator: "gte", value: 99, unit: "%" }));
  state = addNodeConstraint(state, ANALYZE, "service", "slo",
    constraint("Latency",
               { priority: "high", comparator: "lt", value: 10, unit: "seconds" }));
  state = addNodeConstraint(state, ANALYZE, "resource", "slo",
    constraint("CPU Utilization",
               { priority: "medium", comparator: "gt", value: 80, unit: "%" }));
  state = addNodeConstraint(state, ANALYZE, "resource", "config",
    constraint("No of vCPU", { comparator: "gte", value: 4, unit: "unit" }));
  state = addNodeConstraint(state, STORE, "service", "slo",
    constraint("Query Response Time",
               { priority: "medium", comparator: "lt", value: 2, unit: "seconds" }));
  state = addNodeConstraint(state, STORE, "service", "config",
    constraint("Encryption Support", { comparator: "eq", value: true }));
  state = addNodeConstraint(state, STORE, "resource", "config",
    constraint("Storage Capacity",
               { comparator: "gte", value: 500, unit: "GB" }));

  // step 5
  return goToStep(state, 5);
}

describe("RHMS walkthrough", () => {
  it("exports JSON byte-equal to the committed golden file", async () => {
    const state = rhmsWalkthrough();
    expect(state.step).toBe(5);
    const outcome = await finishWizard(state, api);
    expect(outcome.ok).toBe(true);
    if (!outcome.ok) return;
    const golden = readFileSync(
      join(REPO, "corpus", "golden", "rhms-request.sla.json"), "utf-8");
    expect(outcome.json).toBe(golden);
    const dsl = readFileSync(
      join(REPO, "corpus", "rhms-request.slaiot"), "utf-8");
    expect(outcome.dsl).toBe(dsl);
  });

  it("surfaces server diagnostics when the draft is invalid", async () => {
    let state = rhmsWalkthrough();
    state = { ...state, slos: [] };
    const outcome = await finishWizard(state, api);
    expect(outcome.ok).toBe(false);
    if (outcome.ok) return;
    expect(outcome.state.diagnostics.length).toBeGreaterThan(0);
    expect(outcome.state.diagnostics.some((d) => d.code === "missing-slo"))
      .toBe(true);
  });
});

describe("import -> export fixed point", () => {
  const fixtures = ["rhms-request", "minimal-request", "diamond-dag",
                    "ml-prediction", "multi-party"];

  it.each(fixtures)("%s re-exports identically", async (name) => {
    const dslText = readFileSync(join(REPO, "corpus", `${name}.slaiot`),
                                 "utf-8");
    const canonical = await api.convert(dslText, "dsl", "json");
    const state = loadDocument(JSON.parse(canonical) as SlaDocumentJson);
    const outcome = await finishWizard(state, api);
    expect(outcome.ok).toBe(true);
    if (outcome.ok) expect(outcome.json).toBe(canonical);
  });
});

describe("vocabulary-driven forms", () => {
  it("unit choices for Availability are percentage units only", () => {
    const units = unitsForMetric(vocab, "Availability").map((u) => u.symbol);
    expect(units).toContain("%");
    for (const symbol of units) {
      const unit = vocab.units.find((u) => u.symbol === symbol);
      expect(unit?.dimension).toBe("percentage");
    }
    expect(units).not.toContain("minutes");
  });

  it("boolean metrics carry no units and type metrics list allowed values", () => {
    expect(unitsForMetric(vocab, "Encryption Support")).toEqual([]);
    const storageType = findMetric(vocab, "Storage Type");
    expect(storageType?.allowedValues).toContain("SSD (local machine)");
  });

  it("client document assembly matches what the server validates", async () => {
    const state = rhmsWalkthrough();
    const verdict = await api.validate(buildDocument(state));
    expect(verdict).toEqual({ valid: true, diagnostics: [] });
  });
});
