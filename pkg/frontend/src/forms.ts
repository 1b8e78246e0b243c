// Constraint form: one factory used by the application-SLO editor (step 1)
// and every per-node SLO/configuration section (step 4). Dropdown contents
// always derive from the vocabulary payload, so the form cannot produce a
// term the server-side validator rejects as unknown.

import type { ConstraintJson, MetricInfo, Vocabulary } from "./types.js";
import { metricsForScope, unitsForMetric } from "./vocab.js";

const PRIORITIES = ["high", "medium", "low"] as const;
const COMPARATORS = ["gt", "gte", "eq", "neq", "lt", "lte"] as const;
const COMPARATOR_LABELS: Record<string, string> = {
  gt: "greater than",
  gte: "greater than or equal",
  eq: "equal",
  neq: "not equal",
  lt: "less than",
  lte: "less than or equal",
};

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function option(value: string, label?: string): HTMLOptionElement {
  const node = el("option");
  node.value = value;
  node.textContent = label ?? value;
  return node;
}

function select(values: readonly string[],
                labels?: Record<string, string>): HTMLSelectElement {
  const node = el("select");
  for (const value of values) {
    node.appendChild(option(value, labels?.[value]));
  }
  return node;
}

export interface ConstraintFormOptions {
  vocab: Vocabulary;
  scope: string;
  position: "slo" | "config";
  onAdd: (constraint: ConstraintJson) => void;
}

export function constraintForm(options: ConstraintFormOptions): HTMLElement {
  const { vocab, scope, position, onAdd } = options;
  const metrics = metricsForScope(vocab, scope, position);
  const root = el("div", "constraint-form");
  if (metrics.length === 0) {
    root.appendChild(el("span", "hint", "no metrics apply to this scope"));
    return root;
  }

  const metricSelect = select(metrics.map((m) => m.name));
  const prioritySelect = select(PRIORITIES);
  const comparatorSelect = select(COMPARATORS, COMPARATOR_LABELS);
  const valueNumber = el("input") as HTMLInputElement;
  valueNumber.type = "number";
  valueNumber.min = "0";
  valueNumber.step = "any";
  valueNumber.placeholder = "value";
  const valueToggle = el("input") as HTMLInputElement;
  valueToggle.type = "checkbox";
  const toggleWrap = el("label", "toggle");
  toggleWrap.append(valueToggle, document.createTextNode(" required"));
  const valueChoice = el("select") as HTMLSelectElement;
  const unitSelect = el("select") as HTMLSelectElement;
  const addButton = el("button", "add", position === "slo" ? "add SLO" : "add configuration");
  addButton.type = "button";
  const error = el("span", "field-error");

  const current = (): MetricInfo =>
    metrics.find((m) => m.name === metricSelect.value) ?? metrics[0];

  function refresh(): void {
    const metric = current();
    prioritySelect.hidden = metric.kind !== "performance";
    const fixedEq = metric.kind === "boolean" || metric.kind === "type";
    comparatorSelect.hidden = fixedEq;
    valueNumber.hidden = fixedEq;
    toggleWrap.hidden = metric.kind !== "boolean";
    valueChoice.hidden = metric.kind !== "type";
    if (metric.kind === "type") {
      valueChoice.replaceChildren(
        ...(metric.allowedValues ?? []).map((v) => option(v)));
    }
    const units = unitsForMetric(vocab, metric.name);
    unitSelect.hidden = units.length === 0 || fixedEq;
    unitSelect.replaceChildren(option("", "(canonical unit)"),
                               ...units.map((u) => option(u.symbol)));
    if (units.length > 0) unitSelect.value = units[0].symbol;
    error.textContent = "";
  }

  metricSelect.addEventListener("change", refresh);
  addButton.addEventListener("click", () => {
    const metric = current();
    const constraint: ConstraintJson = {
      metric: metric.name,
      kind: metric.kind,
      value: false,
    };
    if (metric.kind === "boolean") {
      constraint.comparator = "eq";
      constraint.value = valueToggle.checked;
    } else if (metric.kind === "type") {
      constraint.comparator = "eq";
      constraint.value = valueChoice.value;
    } else {
      const parsed = Number(valueNumber.value);
      if (valueNumber.value.trim() === "" || Number.isNaN(parsed) || parsed < 0) {
        error.textContent = "enter a non-negative number";
        return;
      }
      constraint.comparator = comparatorSelect.value as ConstraintJson["comparator"];
      constraint.value = parsed;
      if (unitSelect.value) constraint.unit = unitSelect.value;
      if (metric.kind === "performance") {
        constraint.priority = prioritySelect.value as ConstraintJson["priority"];
      }
    }
    onAdd(constraint);
  });

  root.append(metricSelect, prioritySelect, comparatorSelect, valueNumber,
              toggleWrap, valueChoice, unitSelect, addButton, error);
  refresh();
  return root;
}

export function describeConstraint(c: ConstraintJson): string {
  const parts = [c.metric];
  if (c.priority) parts.push(`[${c.priority}]`);
  if (c.comparator && c.comparator !== "eq") {
    parts.push(COMPARATOR_LABELS[c.comparator] ?? c.comparator);
  } else {
    parts.push("=");
  }
  parts.push(String(c.value));
  if (c.unit) parts.push(c.unit);
  return parts.join(" ");
}

export function constraintChips(
  items: ConstraintJson[],
  onRemove: (index: number) => void,
): HTMLElement {
  const list = el("ul", "chips");
  items.forEach((c, index) => {
    const item = el("li", "chip", describeConstraint(c));
    const remove = el("button", "chip-remove", "×");
    remove.type = "button";
    remove.title = "remove";
    remove.addEventListener("click", () => onRemove(index));
    item.appendChild(remove);
    list.appendChild(item);
  });
  return list;
}
