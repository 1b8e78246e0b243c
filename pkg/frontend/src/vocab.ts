// Client-side vocabulary filters: which metrics fit a form section, which
// units fit a metric. Mirrors the server's scope rules so dropdowns never
// offer a term the validator would reject.

import type { MetricInfo, UnitInfo, Vocabulary } from "./types.js";

// Scope tag each service kind validates under (database kinds differ).
const SERVICE_KIND_SCOPE: Record<string, string> = {
  sensing: "sensing",
  networking: "networking",
  ingestion: "ingestion",
  stream_processing: "stream_processing",
  batch_processing: "batch_processing",
  machine_learning: "machine_learning",
  database_sql: "sql_db",
  database_nosql: "nosql_db",
};

const SLO_KINDS = ["performance", "boolean"];
const CONFIG_KINDS = ["boolean", "type", "numerical"];

export function normalizeName(name: string): string {
  return name.split(/\s+/).filter(Boolean).join(" ").toLowerCase();
}

export function scopeForService(kind: string): string {
  return SERVICE_KIND_SCOPE[kind] ?? kind;
}

export function scopeForResource(kind: string): string {
  return kind;
}

export function metricsForScope(
  vocab: Vocabulary,
  scope: string,
  position: "slo" | "config",
): MetricInfo[] {
  const kinds = position === "slo" ? SLO_KINDS : CONFIG_KINDS;
  return vocab.metrics.filter(
    (m) => m.applicability.includes(scope) && kinds.includes(m.kind),
  );
}

export function findMetric(
  vocab: Vocabulary,
  name: string,
): MetricInfo | undefined {
  const key = normalizeName(name);
  return vocab.metrics.find((m) => normalizeName(m.name) === key);
}

export function unitsForMetric(vocab: Vocabulary, name: string): UnitInfo[] {
  const metric = findMetric(vocab, name);
  if (!metric || metric.dimension === "dimensionless") return [];
  return vocab.units.filter((u) => u.dimension === metric.dimension);
}

export function isCatalogActivity(vocab: Vocabulary, name: string): boolean {
  const key = normalizeName(name);
  return vocab.activities.some((a) => normalizeName(a) === key);
}
