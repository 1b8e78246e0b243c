// JSON document shapes (format 1.0) and vocabulary payloads exchanged with
// the backend. These mirror the server's canonical schema; the client never
// invents its own serialization.

export type MetricKind = "performance" | "boolean" | "type" | "numerical";
export type Priority = "high" | "medium" | "low";
export type Comparator = "gt" | "gte" | "eq" | "neq" | "lt" | "lte";
export type SlaType = "offer" | "request";

export interface ConstraintJson {
  metric: string;
  kind: MetricKind;
  priority?: Priority;
  comparator?: Comparator;
  value: number | boolean | string;
  unit?: string;
}

export interface PartyJson {
  id: string;
  name: string;
  roles: string[];
}

export interface ComponentJson {
  kind: string;
  slos: ConstraintJson[];
  configuration: ConstraintJson[];
}

export interface ActivityJson {
  id: string;
  name: string;
  dependsOn: string[];
  requiredService: ComponentJson;
  infrastructureResource: ComponentJson;
}

export interface SlaJson {
  id: string;
  name?: string;
  description: string;
  type: SlaType;
  applicationType: string;
  startDate: string;
  endDate: string;
  parties: PartyJson[];
  slos: ConstraintJson[];
  workflowActivities: ActivityJson[];
}

export interface SlaDocumentJson {
  formatVersion: "1.0";
  sla: SlaJson;
}

export interface MetricInfo {
  name: string;
  kind: MetricKind;
  dimension: string;
  tendency: string;
  applicability: string[];
  allowedValues?: string[];
}

export interface UnitInfo {
  symbol: string;
  dimension: string;
  factor: number | string;
}

export interface Vocabulary {
  metrics: MetricInfo[];
  units: UnitInfo[];
  roles: string[];
  activities: string[];
  serviceKinds: string[];
  resourceKinds: string[];
}

export interface DiagnosticJson {
  severity: "error" | "warning";
  code: string;
  message: string;
  path?: string;
  line?: number;
  col?: number;
}

export interface ValidateResponse {
  valid: boolean;
  diagnostics: DiagnosticJson[];
}
