// Wizard state and transitions for the five-step composition flow:
//   1 application SLOs (+ agreement details)   2 workflow canvas
//   3 service/resource mapping                 4 per-node constraints
//   5 validate & export
//
// State updates are pure: every operation returns a new state. Step k is
// reachable only while steps below k have no blockers. Node positions are
// UI-only and never leave this module except through the canvas renderer.

import type { ActivityNode } from "./graph.js";
import { addEdge, removeNode, wouldCreateCycle } from "./graph.js";
import type {
  ConstraintJson,
  DiagnosticJson,
  PartyJson,
  SlaType,
} from "./types.js";

export interface Metadata {
  id: string;
  name: string;
  description: string;
  type: SlaType;
  applicationType: string;
  startDate: string;
  endDate: string;
}

export interface NodeSpecs {
  serviceKind: string | null;
  resourceKind: string | null;
  serviceSlos: ConstraintJson[];
  serviceConfiguration: ConstraintJson[];
  resourceSlos: ConstraintJson[];
  resourceConfiguration: ConstraintJson[];
}

export interface WizardState {
  step: number;
  dirty: boolean;
  metadata: Metadata;
  parties: PartyJson[];
  slos: ConstraintJson[];
  nodes: ActivityNode[];
  specs: Record<string, NodeSpecs>;
  diagnostics: DiagnosticJson[];
}

// Typical service/resource pair per catalog activity (the template table).
export const DEFAULT_MAPPING: Record<string, [string, string]> = {
  "capture event of interest(eoi)": ["sensing", "iot_device"],
  "capture eoi": ["sensing", "iot_device"],
  "examine the captured (eoi) on fly": ["ingestion", "edge"],
  "examine the captured eoi": ["ingestion", "edge"],
  "actuate based on the captured event's value": ["sensing", "iot_device"],
  "analyze real-time data": ["stream_processing", "cloud"],
  "analyze historical data": ["batch_processing", "cloud"],
  "store unstructured data": ["database_nosql", "cloud"],
  "store results": ["database_nosql", "cloud"],
};

function normalize(name: string): string {
  return name.split(/\s+/).filter(Boolean).join(" ").toLowerCase();
}

export function emptySpecs(): NodeSpecs {
  return {
    serviceKind: null,
    resourceKind: null,
    serviceSlos: [],
    serviceConfiguration: [],
    resourceSlos: [],
    resourceConfiguration: [],
  };
}

export function initialState(): WizardState {
  return {
    step: 1,
    dirty: false,
    metadata: {
      id: "",
      name: "",
      description: "",
      type: "request",
      applicationType: "",
      startDate: "2026-01-01",
      endDate: "2026-12-31",
    },
    parties: [],
    slos: [],
    nodes: [],
    specs: {},
    diagnostics: [],
  };
}

function touched(state: WizardState, changes: Partial<WizardState>): WizardState {
  return { ...state, ...changes, dirty: true };
}

/** Blocking problems that keep the user on the given step. */
export function stepBlockers(state: WizardState, step: number): string[] {
  const blockers: string[] = [];
  if (step === 1) {
    const m = state.metadata;
    if (!m.id.trim()) blockers.push("the agreement needs an id");
    if (!m.description.trim()) blockers.push("the agreement needs a description");
    if (!m.applicationType.trim()) {
      blockers.push("the agreement needs an application type");
    }
    if (!/^\d{4}-\d{2}-\d{2}$/.test(m.startDate) ||
        !/^\d{4}-\d{2}-\d{2}$/.test(m.endDate)) {
      blockers.push("start and end must be YYYY-MM-DD dates");
    } else if (m.startDate >= m.endDate) {
      blockers.push("start date must be before end date");
    }
    if (state.slos.length === 0) {
      blockers.push("add at least one application-level SLO");
    }
  }
  if (step === 3) {
    for (const node of state.nodes) {
      const specs = state.specs[node.id];
      if (!specs || !specs.serviceKind || !specs.resourceKind) {
        blockers.push(`map activity "${node.id}" to a service and a resource`);
      }
    }
  }
  return blockers;
}

export interface Reachability {
  ok: boolean;
  blockers: string[];
}

/** Step `target` is reachable only if every earlier step has no blockers. */
export function canReach(state: WizardState, target: number): Reachability {
  if (target < 1 || target > 5) return { ok: false, blockers: ["no such step"] };
  const blockers: string[] = [];
  for (let step = 1; step < target; step += 1) {
    blockers.push(...stepBlockers(state, step));
  }
  return { ok: blockers.length === 0, blockers };
}

export function goToStep(state: WizardState, target: number): WizardState {
  if (target <= state.step) return { ...state, step: target };
  const reach = canReach(state, target);
  if (!reach.ok) return state;
  return { ...state, step: target };
}

// --- step 1: details, parties, application SLOs ---------------------------

export function setMetadata(
  state: WizardState,
  changes: Partial<Metadata>,
): WizardState {
  return touched(state, { metadata: { ...state.metadata, ...changes } });
}

export function addParty(state: WizardState, party: PartyJson): WizardState {
  return touched(state, { parties: [...state.parties, party] });
}

export function removeParty(state: WizardState, index: number): WizardState {
  return touched(state, {
    parties: state.parties.filter((_, i) => i !== index),
  });
}

export function addSlo(state: WizardState, slo: ConstraintJson): WizardState {
  return touched(state, { slos: [...state.slos, slo] });
}

export function removeSlo(state: WizardState, index: number): WizardState {
  return touched(state, { slos: state.slos.filter((_, i) => i !== index) });
}

// --- step 2: workflow canvas -----------------------------------------------

export type NodeResult =
  | { ok: true; state: WizardState }
  | { ok: false; reason: string };

export function addActivity(
  state: WizardState,
  id: string,
  name: string,
  x: number,
  y: number,
): NodeResult {
  const trimmed = id.trim();
  if (!trimmed) return { ok: false, reason: "activity id must not be empty" };
  if (state.nodes.some((n) => n.id === trimmed)) {
    return { ok: false, reason: `activity "${trimmed}" already exists` };
  }
  const node: ActivityNode = {
    id: trimmed,
    name: name.trim() || trimmed,
    x,
    y,
    dependsOn: [],
  };
  const specs = { ...state.specs, [trimmed]: defaultSpecsFor(node.name) };
  return {
    ok: true,
    state: touched(state, { nodes: [...state.nodes, node], specs }),
  };
}

function defaultSpecsFor(name: string): NodeSpecs {
  const mapping = DEFAULT_MAPPING[normalize(name)];
  const specs = emptySpecs();
  if (mapping) {
    specs.serviceKind = mapping[0];
    specs.resourceKind = mapping[1];
  }
  return specs;
}

export function connectActivities(
  state: WizardState,
  fromId: string,
  toId: string,
): NodeResult {
  const result = addEdge(state.nodes, fromId, toId);
  if (!result.ok) return { ok: false, reason: result.reason };
  return { ok: true, state: touched(state, { nodes: result.nodes }) };
}

export function edgeWouldCycle(
  state: WizardState,
  fromId: string,
  toId: string,
): boolean {
  return wouldCreateCycle(state.nodes, fromId, toId);
}

export function deleteActivity(state: WizardState, id: string): WizardState {
  const specs = { ...state.specs };
  delete specs[id];
  return touched(state, { nodes: removeNode(state.nodes, id), specs });
}

export function moveActivity(
  state: WizardState,
  id: string,
  x: number,
  y: number,
): WizardState {
  // position changes are cosmetic; they do not dirty the document
  return {
    ...state,
    nodes: state.nodes.map((n) => (n.id === id ? { ...n, x, y } : n)),
  };
}

// --- step 3: mapping ---------------------------------------------------------

export function setMapping(
  state: WizardState,
  id: string,
  serviceKind: string | null,
  resourceKind: string | null,
): WizardState {
  const current = state.specs[id] ?? emptySpecs();
  // changing a kind invalidates constraints scoped to the previous kind
  const next: NodeSpecs = {
    ...current,
    serviceKind,
    resourceKind,
    serviceSlos: serviceKind === current.serviceKind ? current.serviceSlos : [],
    serviceConfiguration:
      serviceKind === current.serviceKind ? current.serviceConfiguration : [],
    resourceSlos:
      resourceKind === current.resourceKind ? current.resourceSlos : [],
    resourceConfiguration:
      resourceKind === current.resourceKind
        ? current.resourceConfiguration
        : [],
  };
  return touched(state, { specs: { ...state.specs, [id]: next } });
}

// --- step 4: per-node constraints ---------------------------------------------

export type Side = "service" | "resource";
export type Position = "slo" | "config";

function listKey(side: Side, position: Position): keyof NodeSpecs {
  if (side === "service") {
    return position === "slo" ? "serviceSlos" : "serviceConfiguration";
  }
  return position === "slo" ? "resourceSlos" : "resourceConfiguration";
}

export function addNodeConstraint(
  state: WizardState,
  id: string,
  side: Side,
  position: Position,
  constraint: ConstraintJson,
): WizardState {
  const specs = state.specs[id] ?? emptySpecs();
  const key = listKey(side, position);
  const next = { ...specs, [key]: [...(specs[key] as ConstraintJson[]), constraint] };
  return touched(state, { specs: { ...state.specs, [id]: next } });
}

export function removeNodeConstraint(
  state: WizardState,
  id: string,
  side: Side,
  position: Position,
  index: number,
): WizardState {
  const specs = state.specs[id] ?? emptySpecs();
  const key = listKey(side, position);
  const list = (specs[key] as ConstraintJson[]).filter((_, i) => i !== index);
  const next = { ...specs, [key]: list };
  return touched(state, { specs: { ...state.specs, [id]: next } });
}

export function setDiagnostics(
  state: WizardState,
  diagnostics: DiagnosticJson[],
): WizardState {
  return { ...state, diagnostics };
}

/** Step the user should visit to fix a server diagnostic path. */
export function stepForDiagnosticPath(path: string | undefined): number {
  if (!path) return 5;
  if (path.startsWith("sla.slos") || path === "slos") return 1;
  if (/^sla\.(id|name|description|type|applicationType|startDate|endDate|parties)/.test(path)) {
    return 1;
  }
  if (/requiredService\.kind|infrastructureResource\.kind/.test(path)) return 3;
  if (/requiredService|infrastructureResource/.test(path)) return 4;
  if (path.startsWith("sla.workflowActivities") || path === "activities") {
    return 2;
  }
  return 5;
}
