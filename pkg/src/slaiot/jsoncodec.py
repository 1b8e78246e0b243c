"""Canonical machine-readable SLA document format (`.sla.json`).

The emitted JSON is canonical: fixed key order, 2-space indent, numbers
without trailing zeros, empty arrays always present, optional scalar keys
omitted when absent.  Equal documents serialize to byte-identical text.
Input accepts any key order but the schema is closed: unknown keys are
rejected with a path-addressed diagnostic.
"""

from __future__ import annotations

import json
from typing import Any

from . import dsl
from .diagnostics import Diagnostic, SourceSpan, error
from .model import SlaDocument, build_document
from .vocabulary import VocabularyRegistry

FORMAT_VERSION = "1.0"

_KINDS = ("performance", "boolean", "type", "numerical")

_PATH_MAP = {
    "activities": "workflowActivities",
    "service": "requiredService",
    "resource": "infrastructureResource",
    "sla_type": "type",
    "application_type": "applicationType",
    "start_date": "startDate",
    "end_date": "endDate",
    "depends_on": "dependsOn",
}


def _to_json_path(model_path: str | None) -> str | None:
    """Translate a model diagnostic path into the JSON document's terms."""
    if model_path is None:
        return None
    out = []
    for segment in model_path.split("."):
        name, bracket, index = segment.partition("[")
        name = _PATH_MAP.get(name, name)
        out.append(name + bracket + index)
    return "sla." + ".".join(out)


def _constraint_obj(c) -> dict:
    obj: dict[str, Any] = {"metric": c.metric, "kind": c.kind}
    if c.priority is not None:
        obj["priority"] = c.priority
    if c.comparator is not None:
        obj["comparator"] = c.comparator
    obj["value"] = c.value
    if c.unit is not None:
        obj["unit"] = c.unit
    return obj


def document_to_obj(doc: SlaDocument) -> dict:
    """Plain-data form of a document in canonical key order."""
    sla: dict[str, Any] = {"id": doc.id}
    if doc.name is not None:
        sla["name"] = doc.name
    sla["description"] = doc.description
    sla["type"] = doc.sla_type
    sla["applicationType"] = doc.application_type
    sla["startDate"] = doc.start_date.isoformat()
    sla["endDate"] = doc.end_date.isoformat()
    sla["parties"] = [{"id": p.id, "name": p.name, "roles": list(p.roles)}
                      for p in doc.parties]
    sla["slos"] = [_constraint_obj(c) for c in doc.application_slos]
    sla["workflowActivities"] = [
        {
            "id": a.id,
            "name": a.name,
            "dependsOn": list(a.depends_on),
            "requiredService": {
                "kind": a.service.kind,
                "slos": [_constraint_obj(c) for c in a.service.slos],
                "configuration": [_constraint_obj(c) for c in a.service.configuration],
            },
            "infrastructureResource": {
                "kind": a.resource.kind,
                "slos": [_constraint_obj(c) for c in a.resource.slos],
                "configuration": [_constraint_obj(c) for c in a.resource.configuration],
            },
        }
        for a in doc.activities
    ]
    return {"formatVersion": FORMAT_VERSION, "sla": sla}


def to_json(doc: SlaDocument) -> str:
    """Canonical serialization; byte-identical for equal documents."""
    return json.dumps(document_to_obj(doc), indent=2, ensure_ascii=False) + "\n"


class _SchemaCheck:
    """Closed-schema walk over the decoded JSON value.

    Collects path-addressed diagnostics; semantic validation (vocabulary,
    ranges, graph shape) is left to the model builder.
    """

    def __init__(self) -> None:
        self.diags: list[Diagnostic] = []

    def complain(self, code: str, message: str, path: str) -> None:
        self.diags.append(error(code, message, path=path))

    def obj(self, value: Any, path: str, required: tuple[str, ...],
            optional: tuple[str, ...] = ()) -> dict | None:
        if not isinstance(value, dict):
            self.complain("wrong-type", f"expected an object at {path}", path)
            return None
        for key in sorted(set(value) - set(required) - set(optional)):
            self.complain("unknown-key", f"unknown key {key!r}",
                          f"{path}.{key}" if path else key)
        missing = [k for k in required if k not in value]
        for key in missing:
            self.complain("missing-key", f"missing required key {key!r}", path or key)
        return value if not missing else None

    def string(self, obj: dict, key: str, path: str) -> None:
        if key in obj and not isinstance(obj[key], str):
            self.complain("wrong-type", f"{key!r} must be a string", f"{path}.{key}")

    def array(self, obj: dict, key: str, path: str) -> list:
        value = obj.get(key)
        if not isinstance(value, list):
            self.complain("wrong-type", f"{key!r} must be an array", f"{path}.{key}")
            return []
        return value

    def constraint(self, value: Any, path: str) -> None:
        obj = self.obj(value, path, ("metric", "kind", "value"),
                       ("priority", "comparator", "unit"))
        if obj is None:
            return
        self.string(obj, "metric", path)
        self.string(obj, "priority", path)
        self.string(obj, "comparator", path)
        self.string(obj, "unit", path)
        kind = obj.get("kind")
        if not isinstance(kind, str) or kind not in _KINDS:
            self.complain("bad-value",
                          f"'kind' must be one of {', '.join(_KINDS)}", f"{path}.kind")
            return
        if kind == "performance" and "priority" not in obj:
            self.complain("missing-key",
                          "performance constraints require 'priority'", path)
        if kind in ("performance", "numerical") and "comparator" not in obj:
            self.complain("missing-key",
                          f"{kind} constraints require 'comparator'", path)
        value_field = obj.get("value")
        if not isinstance(value_field, (int, float, bool, str)):
            self.complain("wrong-type",
                          "'value' must be a number, boolean, or string",
                          f"{path}.value")

    def component(self, value: Any, path: str) -> None:
        obj = self.obj(value, path, ("kind", "slos", "configuration"))
        if obj is None:
            return
        self.string(obj, "kind", path)
        for i, c in enumerate(self.array(obj, "slos", path)):
            self.constraint(c, f"{path}.slos[{i}]")
        for i, c in enumerate(self.array(obj, "configuration", path)):
            self.constraint(c, f"{path}.configuration[{i}]")

    def run(self, data: Any) -> None:
        root = self.obj(data, "", ("formatVersion", "sla"))
        if root is None:
            return
        if root.get("formatVersion") != FORMAT_VERSION:
            self.complain("bad-value",
                          f"formatVersion must be {FORMAT_VERSION!r}", "formatVersion")
        sla = self.obj(root.get("sla"), "sla",
                       ("id", "description", "type", "applicationType",
                        "startDate", "endDate", "parties", "slos",
                        "workflowActivities"),
                       ("name",))
        if sla is None:
            return
        for key in ("id", "name", "description", "type", "applicationType",
                    "startDate", "endDate"):
            self.string(sla, key, "sla")
        for i, p in enumerate(self.array(sla, "parties", "sla")):
            ppath = f"sla.parties[{i}]"
            pobj = self.obj(p, ppath, ("id", "name", "roles"))
            if pobj is None:
                continue
            self.string(pobj, "id", ppath)
            self.string(pobj, "name", ppath)
            for j, role in enumerate(self.array(pobj, "roles", ppath)):
                if not isinstance(role, str):
                    self.complain("wrong-type", "roles must be strings",
                                  f"{ppath}.roles[{j}]")
        for i, c in enumerate(self.array(sla, "slos", "sla")):
            self.constraint(c, f"sla.slos[{i}]")
        for i, a in enumerate(self.array(sla, "workflowActivities", "sla")):
            apath = f"sla.workflowActivities[{i}]"
            aobj = self.obj(a, apath, ("id", "name", "dependsOn",
                                       "requiredService", "infrastructureResource"))
            if aobj is None:
                continue
            self.string(aobj, "id", apath)
            self.string(aobj, "name", apath)
            for j, dep in enumerate(self.array(aobj, "dependsOn", apath)):
                if not isinstance(dep, str):
                    self.complain("wrong-type", "dependsOn entries must be strings",
                                  f"{apath}.dependsOn[{j}]")
            self.component(aobj.get("requiredService"), f"{apath}.requiredService")
            self.component(aobj.get("infrastructureResource"),
                           f"{apath}.infrastructureResource")


def _constraint_parts(obj: dict) -> dict:
    return {"metric": obj.get("metric"), "kind": obj.get("kind"),
            "priority": obj.get("priority"), "comparator": obj.get("comparator"),
            "value": obj.get("value"), "unit": obj.get("unit")}


def _component_parts(obj: dict) -> dict:
    return {"kind": obj.get("kind"),
            "slos": [_constraint_parts(c) for c in obj.get("slos", [])],
            "configuration": [_constraint_parts(c) for c in obj.get("configuration", [])]}


def from_json(text: str, registry: VocabularyRegistry,
              ) -> tuple[SlaDocument | None, list[Diagnostic]]:
    """Parse and validate a JSON SLA document (any key order accepted)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        span = SourceSpan(exc.lineno, exc.colno, exc.lineno, exc.colno)
        return None, [error("json-malformed", f"invalid JSON: {exc.msg}", span=span)]
    check = _SchemaCheck()
    check.run(data)
    if check.diags:
        return None, check.diags

    sla = data["sla"]
    parts = {
        "id": sla.get("id"),
        "name": sla.get("name"),
        "description": sla.get("description"),
        "sla_type": sla.get("type"),
        "application_type": sla.get("applicationType"),
        "start_date": sla.get("startDate"),
        "end_date": sla.get("endDate"),
        "parties": [{"id": p.get("id"), "name": p.get("name"),
                     "roles": p.get("roles", [])} for p in sla.get("parties", [])],
        "slos": [_constraint_parts(c) for c in sla.get("slos", [])],
        "activities": [
            {"id": a.get("id"), "name": a.get("name"),
             "depends_on": a.get("dependsOn", []),
             "service": _component_parts(a.get("requiredService", {})),
             "resource": _component_parts(a.get("infrastructureResource", {}))}
            for a in sla.get("workflowActivities", [])
        ],
    }
    doc, diags = build_document(parts, registry)
    return doc, [d.with_path(_to_json_path(d.path)) for d in diags]


def convert(text: str, source_format: str, target_format: str,
            registry: VocabularyRegistry) -> tuple[str | None, list[Diagnostic]]:
    """Cross-codec conversion; also canonicalizes within one format."""
    if source_format == "dsl":
        doc, diags = dsl.parse_text(text, registry)
    elif source_format == "json":
        doc, diags = from_json(text, registry)
    else:
        raise ValueError(f"unknown source format {source_format!r}")
    if doc is None:
        return None, diags
    if target_format == "dsl":
        return dsl.print_text(doc), diags
    if target_format == "json":
        return to_json(doc), diags
    raise ValueError(f"unknown target format {target_format!r}")
