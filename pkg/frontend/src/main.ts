// Wizard shell: five linear steps with gated navigation, backed entirely by
// the local service API. All serialization and final validation is
// server-side; this file only renders state and applies transitions.

import { ApiClient, ApiError } from "./api.js";
import { disarm, renderCanvas } from "./canvas.js";
import { buildDocument, finishWizard, loadDocument } from "./document.js";
import { constraintChips, constraintForm, el } from "./forms.js";
import type { Side, WizardState } from "./state.js";
import {
  addActivity,
  addNodeConstraint,
  addParty,
  addSlo,
  canReach,
  connectActivities,
  deleteActivity,
  emptySpecs,
  goToStep,
  initialState,
  moveActivity,
  removeNodeConstraint,
  removeParty,
  removeSlo,
  setDiagnostics,
  setMapping,
  setMetadata,
  stepBlockers,
  stepForDiagnosticPath,
} from "./state.js";
import type { SlaDocumentJson, Vocabulary } from "./types.js";
import { scopeForResource, scopeForService } from "./vocab.js";

const STEP_TITLES = [
  "Application SLOs",
  "Workflow activities",
  "Service & resource mapping",
  "SLO and configuration requirements",
  "Review & export",
];

const api = new ApiClient("");
let vocab: Vocabulary | null = null;
let state: WizardState = initialState();

function update(next: WizardState): void {
  state = next;
  render();
}

function toast(message: string): void {
  const area = document.getElementById("toast")!;
  area.textContent = message;
  area.classList.add("visible");
  window.setTimeout(() => area.classList.remove("visible"), 2600);
}

function textInput(value: string, placeholder: string,
                   onChange: (v: string) => void): HTMLInputElement {
  const input = el("input") as HTMLInputElement;
  input.type = "text";
  input.value = value;
  input.placeholder = placeholder;
  input.addEventListener("change", () => onChange(input.value));
  return input;
}

function labeled(label: string, control: HTMLElement): HTMLElement {
  const wrap = el("label", "field");
  wrap.appendChild(el("span", "field-label", label));
  wrap.appendChild(control);
  return wrap;
}

// --- step renderers ----------------------------------------------------------

function renderStep1(panel: HTMLElement, v: Vocabulary): void {
  const meta = state.metadata;
  const details = el("fieldset", "group");
  details.appendChild(el("legend", undefined, "Agreement details"));
  details.appendChild(labeled("id", textInput(meta.id, "my-sla", (x) =>
    update(setMetadata(state, { id: x })))));
  details.appendChild(labeled("name (optional)", textInput(meta.name, "", (x) =>
    update(setMetadata(state, { name: x })))));
  details.appendChild(labeled("description", textInput(meta.description, "", (x) =>
    update(setMetadata(state, { description: x })))));
  const typeSelect = el("select") as HTMLSelectElement;
  for (const t of ["request", "offer"]) {
    const o = el("option", undefined, t) as HTMLOptionElement;
    o.value = t;
    typeSelect.appendChild(o);
  }
  typeSelect.value = meta.type;
  typeSelect.addEventListener("change", () =>
    update(setMetadata(state, { type: typeSelect.value as "offer" | "request" })));
  details.appendChild(labeled("document type", typeSelect));
  details.appendChild(labeled("application type",
    textInput(meta.applicationType, "smart health", (x) =>
      update(setMetadata(state, { applicationType: x })))));
  details.appendChild(labeled("start date", textInput(meta.startDate, "YYYY-MM-DD",
    (x) => update(setMetadata(state, { startDate: x })))));
  details.appendChild(labeled("end date", textInput(meta.endDate, "YYYY-MM-DD",
    (x) => update(setMetadata(state, { endDate: x })))));
  panel.appendChild(details);

  const parties = el("fieldset", "group");
  parties.appendChild(el("legend", undefined, "Parties"));
  state.parties.forEach((p, i) => {
    const row = el("div", "party-row",
                   `${p.name} (${p.id}) — ${p.roles.join(", ")}`);
    const remove = el("button", "chip-remove", "×");
    remove.type = "button";
    remove.addEventListener("click", () => update(removeParty(state, i)));
    row.appendChild(remove);
    parties.appendChild(row);
  });
  const pName = textInput("", "party name", () => undefined);
  const pId = textInput("", "party id", () => undefined);
  const roleSelect = el("select") as HTMLSelectElement;
  roleSelect.multiple = true;
  roleSelect.size = Math.min(4, v.roles.length);
  for (const role of v.roles) {
    const o = el("option", undefined, role) as HTMLOptionElement;
    o.value = role;
    roleSelect.appendChild(o);
  }
  const addPartyButton = el("button", "add", "add party");
  addPartyButton.type = "button";
  addPartyButton.addEventListener("click", () => {
    const roles = Array.from(roleSelect.selectedOptions).map((o) => o.value);
    if (!pName.value.trim() || !pId.value.trim() || roles.length === 0) {
      toast("a party needs a name, an id, and at least one role");
      return;
    }
    update(addParty(state, { id: pId.value.trim(), name: pName.value.trim(),
                             roles }));
  });
  const partyForm = el("div", "party-form");
  partyForm.append(pName, pId, roleSelect, addPartyButton);
  parties.appendChild(partyForm);
  panel.appendChild(parties);

  const slos = el("fieldset", "group");
  slos.appendChild(el("legend", undefined,
                      "Service level objectives (application level)"));
  slos.appendChild(constraintChips(state.slos, (i) =>
    update(removeSlo(state, i))));
  slos.appendChild(constraintForm({
    vocab: v, scope: "application", position: "slo",
    onAdd: (c) => update(addSlo(state, c)),
  }));
  panel.appendChild(slos);
}

function renderStep2(panel: HTMLElement, v: Vocabulary): void {
  const palette = el("div", "palette");
  palette.appendChild(el("span", "hint",
    "add an activity, then use ▶ on a source node and click a target to " +
    "connect them"));
  const nameSelect = el("select") as HTMLSelectElement;
  for (const activity of v.activities) {
    const o = el("option", undefined, activity) as HTMLOptionElement;
    o.value = activity;
    nameSelect.appendChild(o);
  }
  const customName = textInput("", "or a custom activity name", () => undefined);
  const addButton = el("button", "add", "add activity");
  addButton.type = "button";
  addButton.addEventListener("click", () => {
    const name = customName.value.trim() || nameSelect.value;
    const slot = state.nodes.length;
    const result = addActivity(state, name, name,
                               40 + (slot % 4) * 190,
                               40 + Math.floor(slot / 4) * 130);
    if (!result.ok) {
      toast(result.reason);
      return;
    }
    customName.value = "";
    update(result.state);
  });
  palette.append(nameSelect, customName, addButton);
  panel.appendChild(palette);

  const canvasHost = el("div", "canvas-host");
  panel.appendChild(canvasHost);
  renderCanvas(canvasHost, state.nodes, {
    onMove: (id, x, y) => update(moveActivity(state, id, x, y)),
    onConnect: (fromId, toId) => {
      const result = connectActivities(state, fromId, toId);
      if (!result.ok) {
        toast(result.reason);
        render();
        return;
      }
      update(result.state);
    },
    onDelete: (id) => update(deleteActivity(state, id)),
  });
}

function kindSelect(kinds: string[], value: string | null,
                    onChange: (kind: string) => void): HTMLSelectElement {
  const node = el("select") as HTMLSelectElement;
  const blank = el("option", undefined, "(choose)") as HTMLOptionElement;
  blank.value = "";
  node.appendChild(blank);
  for (const kind of kinds) {
    const o = el("option", undefined, kind) as HTMLOptionElement;
    o.value = kind;
    node.appendChild(o);
  }
  node.value = value ?? "";
  node.addEventListener("change", () => {
    if (node.value) onChange(node.value);
  });
  return node;
}

function renderStep3(panel: HTMLElement, v: Vocabulary): void {
  if (state.nodes.length === 0) {
    panel.appendChild(el("p", "hint", "no activities yet — go back to step 2"));
    return;
  }
  const table = el("table", "mapping");
  const head = el("tr");
  for (const title of ["activity", "required service", "infrastructure resource"]) {
    head.appendChild(el("th", undefined, title));
  }
  table.appendChild(head);
  for (const node of state.nodes) {
    const specs = state.specs[node.id] ?? emptySpecs();
    const row = el("tr");
    row.appendChild(el("td", undefined, node.id));
    const serviceCell = el("td");
    serviceCell.appendChild(kindSelect(v.serviceKinds, specs.serviceKind,
      (kind) => update(setMapping(state, node.id, kind, specs.resourceKind))));
    row.appendChild(serviceCell);
    const resourceCell = el("td");
    resourceCell.appendChild(kindSelect(v.resourceKinds, specs.resourceKind,
      (kind) => update(setMapping(state, node.id, specs.serviceKind, kind))));
    row.appendChild(resourceCell);
    table.appendChild(row);
  }
  panel.appendChild(table);
}

function specSection(v: Vocabulary, nodeId: string, side: Side, kind: string,
                     scope: string): HTMLElement {
  const specs = state.specs[nodeId] ?? emptySpecs();
  const section = el("div", "spec-section");
  section.appendChild(el("h4", undefined, `${side}: ${kind}`));
  const slos = side === "service" ? specs.serviceSlos : specs.resourceSlos;
  const config = side === "service"
    ? specs.serviceConfiguration : specs.resourceConfiguration;

  section.appendChild(el("h5", undefined, "SLOs"));
  section.appendChild(constraintChips(slos, (i) =>
    update(removeNodeConstraint(state, nodeId, side, "slo", i))));
  section.appendChild(constraintForm({
    vocab: v, scope, position: "slo",
    onAdd: (c) => update(addNodeConstraint(state, nodeId, side, "slo", c)),
  }));

  section.appendChild(el("h5", undefined, "Configuration"));
  section.appendChild(constraintChips(config, (i) =>
    update(removeNodeConstraint(state, nodeId, side, "config", i))));
  section.appendChild(constraintForm({
    vocab: v, scope, position: "config",
    onAdd: (c) => update(addNodeConstraint(state, nodeId, side, "config", c)),
  }));
  return section;
}

function renderStep4(panel: HTMLElement, v: Vocabulary): void {
  if (state.nodes.length === 0) {
    panel.appendChild(el("p", "hint",
      "no activities to constrain — application SLOs from step 1 still apply"));
    return;
  }
  for (const node of state.nodes) {
    const specs = state.specs[node.id] ?? emptySpecs();
    const card = el("fieldset", "group");
    card.appendChild(el("legend", undefined, node.id));
    if (!specs.serviceKind || !specs.resourceKind) {
      card.appendChild(el("p", "hint", "map this activity in step 3 first"));
      panel.appendChild(card);
      continue;
    }
    card.appendChild(specSection(v, node.id, "service", specs.serviceKind,
                                 scopeForService(specs.serviceKind)));
    card.appendChild(specSection(v, node.id, "resource", specs.resourceKind,
                                 scopeForResource(specs.resourceKind)));
    panel.appendChild(card);
  }
}

function download(filename: string, text: string, mime: string): void {
  const blob = new Blob([text], { type: mime });
  const url = URL.createObjectURL(blob);
  const anchor = el("a") as HTMLAnchorElement;
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

function renderStep5(panel: HTMLElement): void {
  const finishButton = el("button", "primary", "Finish — validate and export");
  finishButton.type = "button";
  finishButton.addEventListener("click", () => {
    void (async () => {
      try {
        const outcome = await finishWizard(state, api);
        if (!outcome.ok) {
          update(outcome.state);
          toast("the document has validation problems");
          return;
        }
        const id = state.metadata.id || "sla";
        download(`${id}.sla.json`, outcome.json, "application/json");
        download(`${id}.slaiot`, outcome.dsl, "text/plain");
        update(setDiagnostics(state, []));
        toast("SLA exported");
      } catch (exc) {
        toast(exc instanceof ApiError ? exc.message : String(exc));
      }
    })();
  });
  panel.appendChild(finishButton);

  const importLabel = el("label", "import");
  importLabel.appendChild(el("span", undefined, "import existing .sla.json"));
  const importInput = el("input") as HTMLInputElement;
  importInput.type = "file";
  importInput.accept = ".json,.sla.json,application/json";
  importInput.addEventListener("change", () => {
    const file = importInput.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      try {
        const doc = JSON.parse(text) as SlaDocumentJson;
        update({ ...loadDocument(doc), step: 5 });
        toast("document imported");
      } catch {
        toast("that file is not valid JSON");
      }
    });
  });
  importLabel.appendChild(importInput);
  panel.appendChild(importLabel);

  if (state.diagnostics.length > 0) {
    const list = el("ul", "diagnostics");
    for (const diag of state.diagnostics) {
      const item = el("li", `diagnostic ${diag.severity}`,
                      `${diag.severity}: ${diag.message}`);
      if (diag.path) {
        const go = el("button", "goto", `fix in step ${stepForDiagnosticPath(diag.path)}`);
        go.type = "button";
        go.addEventListener("click", () =>
          update(goToStep(state, stepForDiagnosticPath(diag.path))));
        item.appendChild(go);
      }
      list.appendChild(item);
    }
    panel.appendChild(list);
  } else {
    const preview = el("pre", "preview",
                       JSON.stringify(buildDocument(state), null, 2));
    panel.appendChild(preview);
  }
}

// --- shell ---------------------------------------------------------------------

function render(): void {
  const nav = document.getElementById("steps")!;
  const panel = document.getElementById("panel")!;
  const blockerBox = document.getElementById("blockers")!;
  nav.replaceChildren();
  panel.replaceChildren();
  disarm();

  STEP_TITLES.forEach((title, i) => {
    const step = i + 1;
    const button = el("button", "step-button", `${step}. ${title}`);
    button.type = "button";
    const reach = canReach(state, step);
    button.disabled = !reach.ok && step > state.step;
    if (step === state.step) button.classList.add("active");
    button.addEventListener("click", () => update(goToStep(state, step)));
    nav.appendChild(button);
  });

  const blockers = stepBlockers(state, state.step);
  const forward = canReach(state, state.step + 1);
  blockerBox.replaceChildren();
  if (state.step < 5) {
    for (const blocker of blockers.length > 0 ? blockers : forward.blockers) {
      blockerBox.appendChild(el("div", "blocker", blocker));
    }
  }

  if (!vocab) {
    panel.appendChild(el("p", "hint", "loading vocabulary…"));
    return;
  }
  switch (state.step) {
    case 1: renderStep1(panel, vocab); break;
    case 2: renderStep2(panel, vocab); break;
    case 3: renderStep3(panel, vocab); break;
    case 4: renderStep4(panel, vocab); break;
    default: renderStep5(panel);
  }

  const next = el("button", "primary nav-next",
                  state.step < 5 ? "Next step →" : "");
  if (state.step < 5) {
    next.type = "button";
    next.disabled = !forward.ok;
    next.addEventListener("click", () => update(goToStep(state, state.step + 1)));
    panel.appendChild(next);
  }
}

async function boot(): Promise<void> {
  render();
  try {
    vocab = await api.vocabulary();
  } catch (exc) {
    toast(`cannot reach the service: ${String(exc)}`);
    return;
  }
  render();
}

if (typeof document !== "undefined" && document.getElementById("panel")) {
  void boot();
}
