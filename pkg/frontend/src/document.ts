// Assemble the export document from wizard state and repopulate state from
// an imported document. Canvas positions never enter the document; imports
// lay nodes out on a simple grid.

import type { ActivityNode } from "./graph.js";
import type { NodeSpecs, WizardState } from "./state.js";
import { emptySpecs, initialState } from "./state.js";
import type {
  ActivityJson,
  ComponentJson,
  ConstraintJson,
  SlaDocumentJson,
} from "./types.js";
import type { ApiClient } from "./api.js";

function component(kind: string | null, slos: ConstraintJson[],
                   configuration: ConstraintJson[]): ComponentJson {
  return { kind: kind ?? "", slos, configuration };
}

export function buildDocument(state: WizardState): SlaDocumentJson {
  const m = state.metadata;
  const activities: ActivityJson[] = state.nodes.map((node) => {
    const specs = state.specs[node.id] ?? emptySpecs();
    return {
      id: node.id,
      name: node.name,
      dependsOn: [...node.dependsOn],
      requiredService: component(
        specs.serviceKind, specs.serviceSlos, specs.serviceConfiguration),
      infrastructureResource: component(
        specs.resourceKind, specs.resourceSlos, specs.resourceConfiguration),
    };
  });
  return {
    formatVersion: "1.0",
    sla: {
      id: m.id,
      ...(m.name.trim() ? { name: m.name } : {}),
      description: m.description,
      type: m.type,
      applicationType: m.applicationType,
      startDate: m.startDate,
      endDate: m.endDate,
      parties: state.parties.map((p) => ({ ...p, roles: [...p.roles] })),
      slos: [...state.slos],
      workflowActivities: activities,
    },
  };
}

const GRID_X = 190;
const GRID_Y = 130;
const PER_ROW = 4;

export function loadDocument(doc: SlaDocumentJson): WizardState {
  const sla = doc.sla;
  const state = initialState();
  const nodes: ActivityNode[] = sla.workflowActivities.map((a, i) => ({
    id: a.id,
    name: a.name,
    x: 40 + (i % PER_ROW) * GRID_X,
    y: 40 + Math.floor(i / PER_ROW) * GRID_Y,
    dependsOn: [...a.dependsOn],
  }));
  const specs: Record<string, NodeSpecs> = {};
  for (const a of sla.workflowActivities) {
    specs[a.id] = {
      serviceKind: a.requiredService.kind,
      resourceKind: a.infrastructureResource.kind,
      serviceSlos: [...a.requiredService.slos],
      serviceConfiguration: [...a.requiredService.configuration],
      resourceSlos: [...a.infrastructureResource.slos],
      resourceConfiguration: [...a.infrastructureResource.configuration],
    };
  }
  return {
    ...state,
    metadata: {
      id: sla.id,
      name: sla.name ?? "",
      description: sla.description,
      type: sla.type,
      applicationType: sla.applicationType,
      startDate: sla.startDate,
      endDate: sla.endDate,
    },
    parties: sla.parties.map((p) => ({ ...p, roles: [...p.roles] })),
    slos: [...sla.slos],
    nodes,
    specs,
  };
}

export interface FinishOk {
  ok: true;
  json: string;
  dsl: string;
}

export interface FinishBlocked {
  ok: false;
  state: WizardState;
}

/**
 * Step 5: validate on the server, then fetch both canonical renderings.
 * The client never serializes the final artifact itself, so wizard output
 * is byte-identical to the CLI's.
 */
export async function finishWizard(
  state: WizardState,
  api: ApiClient,
): Promise<FinishOk | FinishBlocked> {
  const document = buildDocument(state);
  const verdict = await api.validate(document);
  if (!verdict.valid) {
    return { ok: false, state: { ...state, diagnostics: verdict.diagnostics } };
  }
  const raw = JSON.stringify(document);
  const json = await api.convert(raw, "json", "json");
  const dsl = await api.convert(raw, "json", "dsl");
  return { ok: true, json, dsl };
}
