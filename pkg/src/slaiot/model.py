"""In-memory SLA documents and their structural invariants.

Documents are immutable value objects.  The only way to obtain one is
:func:`build_document`, which validates every invariant and reports each
violation as a path-addressed diagnostic, so no invalid document is
representable.  Warnings (free-form activity names, zero parties) do not
block construction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from datetime import date
from fractions import Fraction
from typing import Any, Iterator, Mapping

from . import vocabulary as vocab
from .diagnostics import Diagnostic, error, has_errors, warning
from .vocabulary import (MetricDef, VocabularyRegistry, normalize_name,
                         RESOURCE_KIND_SCOPE, SERVICE_KIND_SCOPE)

PRIORITIES = ("high", "medium", "low")
COMPARATORS = ("gt", "gte", "eq", "neq", "lt", "lte")
SLA_TYPES = ("offer", "request")

# Constraint kinds admitted per position in the document.
SLO_KINDS = ("performance", "boolean")
CONFIG_KINDS = ("boolean", "type", "numerical")


@dataclass(frozen=True)
class Constraint:
    """One metric requirement: comparator, threshold value, optional unit."""

    metric: str
    kind: str
    comparator: str
    value: int | float | bool | str
    priority: str | None = None
    unit: str | None = None


@dataclass(frozen=True)
class Party:
    id: str
    name: str
    roles: tuple[str, ...]


@dataclass(frozen=True)
class ComponentSpec:
    """SLOs and configuration of one required service or one resource."""

    kind: str
    slos: tuple[Constraint, ...]
    configuration: tuple[Constraint, ...]


@dataclass(frozen=True)
class WorkflowActivity:
    """A named workflow step with its dependencies, service, and resource."""

    id: str
    name: str
    depends_on: tuple[str, ...]
    service: ComponentSpec
    resource: ComponentSpec


@dataclass(frozen=True)
class SlaDocument:
    id: str
    description: str
    sla_type: str
    application_type: str
    start_date: date
    end_date: date
    parties: tuple[Party, ...]
    application_slos: tuple[Constraint, ...]
    activities: tuple[WorkflowActivity, ...]
    name: str | None = None


class UsageError(Exception):
    """Caller misused an API (e.g. matched two offers); maps to CLI exit 2."""


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _canon_number(v: int | float) -> int | float:
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def _parse_date(raw: Any, path: str, diags: list[Diagnostic]) -> date | None:
    if isinstance(raw, date):
        return raw
    if isinstance(raw, str):
        try:
            return date.fromisoformat(raw)
        except ValueError:
            pass
    diags.append(error("bad-date", f"expected a YYYY-MM-DD date, got {raw!r}",
                       path=path))
    return None


def _build_constraint(part: Mapping[str, Any], *, scope: str, position: str,
                      path: str, registry: VocabularyRegistry,
                      diags: list[Diagnostic]) -> Constraint | None:
    """Validate one constraint part against the registry.

    ``position`` is "slo" or "config" and decides which metric kinds are
    admissible here.
    """
    metric_name = part.get("metric")
    if not isinstance(metric_name, str) or not metric_name.strip():
        diags.append(error("bad-metric", "constraint needs a metric name",
                           path=f"{path}.metric"))
        return None
    try:
        mdef = registry.resolve_metric(metric_name, scope)
    except vocab.VocabularyError as exc:
        diags.append(exc.diagnostic.with_path(f"{path}.metric"))
        return None

    ok = True
    kind = part.get("kind")
    if kind is not None and kind != mdef.kind:
        diags.append(error(
            "kind-mismatch",
            f"metric {mdef.name!r} has kind {mdef.kind!r}, not {kind!r}",
            path=f"{path}.kind"))
        ok = False
    kind = mdef.kind

    allowed_kinds = SLO_KINDS if position == "slo" else CONFIG_KINDS
    if kind not in allowed_kinds:
        code = "slo-kind" if position == "slo" else "config-kind"
        where = "an SLO" if position == "slo" else "a configuration metric"
        diags.append(error(
            code, f"{kind} metric {mdef.name!r} cannot be used as {where}",
            path=path))
        ok = False

    priority = part.get("priority")
    if kind == "performance":
        if priority is None:
            diags.append(error("priority-required",
                               f"performance metric {mdef.name!r} needs a priority",
                               path=f"{path}.priority"))
            ok = False
        elif priority not in PRIORITIES:
            diags.append(error("bad-priority",
                               f"priority must be one of {', '.join(PRIORITIES)}",
                               path=f"{path}.priority"))
            ok = False
    elif priority is not None:
        diags.append(error("priority-forbidden",
                           f"{kind} metric {mdef.name!r} does not take a priority",
                           path=f"{path}.priority"))
        ok = False

    comparator = part.get("comparator")
    if kind in ("performance", "numerical"):
        if comparator is None:
            diags.append(error("comparator-required",
                               f"metric {mdef.name!r} needs a comparator",
                               path=f"{path}.comparator"))
            ok = False
        elif comparator not in COMPARATORS:
            diags.append(error("bad-comparator",
                               f"comparator must be one of {', '.join(COMPARATORS)}",
                               path=f"{path}.comparator"))
            ok = False
    else:
        if comparator is not None and comparator != "eq":
            diags.append(error("comparator-invalid",
                               f"{kind} metric {mdef.name!r} only supports 'eq'",
                               path=f"{path}.comparator"))
            ok = False
        comparator = "eq"

    value = part.get("value")
    unit_symbol = part.get("unit")
    if kind == "boolean":
        if not isinstance(value, bool):
            diags.append(error("value-type",
                               f"boolean metric {mdef.name!r} needs true or false",
                               path=f"{path}.value"))
            ok = False
    elif kind == "type":
        allowed = mdef.allowed_values or ()
        canon = {normalize_name(v): v for v in allowed}
        if not isinstance(value, str) or normalize_name(value) not in canon:
            diags.append(error(
                "type-value",
                f"value for {mdef.name!r} must be one of: {', '.join(allowed)}",
                path=f"{path}.value"))
            ok = False
        else:
            value = canon[normalize_name(value)]
    else:
        if not _is_number(value) or value != value or value in (float("inf"), float("-inf")):
            diags.append(error("value-type",
                               f"metric {mdef.name!r} needs a finite number",
                               path=f"{path}.value"))
            ok = False
        elif value < 0:
            diags.append(error("negative-value",
                               f"metric {mdef.name!r} cannot be negative",
                               path=f"{path}.value"))
            ok = False
        else:
            value = _canon_number(value)

    udef = None
    if unit_symbol is not None:
        if kind not in ("performance", "numerical"):
            diags.append(error("unit-forbidden",
                               f"{kind} metric {mdef.name!r} does not take a unit",
                               path=f"{path}.unit"))
            ok = False
        else:
            try:
                udef = registry.unit(unit_symbol)
            except vocab.UnknownUnitError as exc:
                diags.append(exc.diagnostic.with_path(f"{path}.unit"))
                ok = False
            else:
                if udef.dimension != mdef.dimension:
                    diags.append(error(
                        "unit-dimension",
                        f"unit {unit_symbol!r} is {udef.dimension}, but metric "
                        f"{mdef.name!r} is {mdef.dimension}",
                        path=f"{path}.unit"))
                    ok = False

    if (ok and mdef.dimension == "percentage" and _is_number(value)):
        factor = udef.factor_to_canonical if udef else Fraction(1)
        normalized = Fraction(value) * factor
        if not (0 <= normalized <= 100):
            diags.append(error("percentage-range",
                               f"percentage value {value} must lie in [0, 100]",
                               path=f"{path}.value"))
            ok = False

    if not ok:
        return None
    return Constraint(metric=mdef.name, kind=kind, comparator=comparator,
                      value=value, priority=priority, unit=unit_symbol)


def _build_spec(part: Mapping[str, Any], *, which: str, path: str,
                registry: VocabularyRegistry,
                diags: list[Diagnostic]) -> ComponentSpec | None:
    kinds = registry.service_kinds if which == "service" else registry.resource_kinds
    scope_map = SERVICE_KIND_SCOPE if which == "service" else RESOURCE_KIND_SCOPE
    kind = part.get("kind")
    if kind not in kinds:
        diags.append(error(f"bad-{which}-kind",
                           f"{which} kind must be one of {', '.join(kinds)}",
                           path=f"{path}.kind"))
        return None
    scope = scope_map[kind]
    slos = [_build_constraint(c, scope=scope, position="slo",
                              path=f"{path}.slos[{i}]", registry=registry,
                              diags=diags)
            for i, c in enumerate(part.get("slos", []))]
    config = [_build_constraint(c, scope=scope, position="config",
                                path=f"{path}.configuration[{i}]",
                                registry=registry, diags=diags)
              for i, c in enumerate(part.get("configuration", []))]
    if any(c is None for c in slos) or any(c is None for c in config):
        return None
    return ComponentSpec(kind=kind, slos=tuple(slos), configuration=tuple(config))


def _find_cycle(ids: list[str], edges: dict[str, tuple[str, ...]]) -> list[str] | None:
    """One dependency cycle as a closed id walk, or None if acyclic."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        stack.append(node)
        for dep in edges.get(node, ()):
            if dep not in color:
                continue
            if color[dep] == GRAY:
                start = stack.index(dep)
                return stack[start:] + [dep]
            if color[dep] == WHITE:
                found = visit(dep)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for i in ids:
        if color[i] == WHITE:
            found = visit(i)
            if found:
                return found
    return None


def build_document(parts: Mapping[str, Any], registry: VocabularyRegistry,
                   ) -> tuple[SlaDocument | None, list[Diagnostic]]:
    """Validate raw document parts and construct the document.

    Returns ``(document, diagnostics)``; the document is None exactly when
    any diagnostic is an error.  Construction is total validation: every
    listed invariant of the model is checked here with a distinct, path-
    addressed diagnostic per violation.
    """
    diags: list[Diagnostic] = []

    doc_id = parts.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        diags.append(error("bad-id", "document needs a non-empty string id", path="id"))
        doc_id = ""
    name = parts.get("name")
    if name is not None and not isinstance(name, str):
        diags.append(error("bad-name", "document name must be a string", path="name"))
        name = None
    description = parts.get("description")
    if not isinstance(description, str):
        diags.append(error("bad-description", "document needs a description string",
                           path="description"))
        description = ""
    sla_type = parts.get("sla_type")
    if sla_type not in SLA_TYPES:
        diags.append(error("bad-sla-type", "sla type must be 'offer' or 'request'",
                           path="sla_type"))
    application_type = parts.get("application_type")
    if not isinstance(application_type, str) or not application_type:
        diags.append(error("bad-application-type",
                           "document needs an application type", path="application_type"))
        application_type = ""

    start = _parse_date(parts.get("start_date"), "start_date", diags)
    end = _parse_date(parts.get("end_date"), "end_date", diags)
    if start is not None and end is not None and start >= end:
        diags.append(error("date-order",
                           f"start date {start.isoformat()} must be strictly before "
                           f"end date {end.isoformat()}", path="start_date"))

    parties: list[Party] = []
    raw_parties = parts.get("parties", [])
    for i, p in enumerate(raw_parties):
        ppath = f"parties[{i}]"
        pid = p.get("id")
        pname = p.get("name")
        good = True
        if not isinstance(pid, str) or not pid:
            diags.append(error("bad-id", "party needs a non-empty id", path=f"{ppath}.id"))
            good = False
        if not isinstance(pname, str) or not pname:
            diags.append(error("bad-name", "party needs a name", path=f"{ppath}.name"))
            good = False
        roles = tuple(p.get("roles", ()))
        if not roles:
            diags.append(error("roles-required", "party needs at least one role",
                               path=f"{ppath}.roles"))
            good = False
        for j, role in enumerate(roles):
            if not registry.has_role(role):
                diags.append(error(
                    "unknown-role",
                    f"role {role!r} is not in the registry "
                    f"(known: {', '.join(registry.roles)})",
                    path=f"{ppath}.roles[{j}]"))
                good = False
        if good:
            parties.append(Party(id=pid, name=pname, roles=roles))
    if not raw_parties:
        diags.append(warning("no-parties",
                             "document names no parties; an agreement without a "
                             "provider may not be actionable", path="parties"))

    raw_slos = parts.get("slos", [])
    app_slos = [_build_constraint(c, scope="application", position="slo",
                                  path=f"slos[{i}]", registry=registry, diags=diags)
                for i, c in enumerate(raw_slos)]
    if not raw_slos:
        diags.append(error("missing-slo",
                           "an SLA requires at least one application-level SLO",
                           path="slos"))

    activities: list[WorkflowActivity] = []
    raw_activities = parts.get("activities", [])
    seen_ids: set[str] = set()
    for i, a in enumerate(raw_activities):
        apath = f"activities[{i}]"
        aid = a.get("id")
        good = True
        if not isinstance(aid, str) or not aid:
            diags.append(error("bad-id", "activity needs a non-empty id",
                               path=f"{apath}.id"))
            aid = ""
            good = False
        elif aid in seen_ids:
            diags.append(error("duplicate-activity",
                               f"activity id {aid!r} is used more than once",
                               path=f"{apath}.id"))
            good = False
        seen_ids.add(aid)
        aname = a.get("name", aid)
        if not isinstance(aname, str) or not aname:
            diags.append(error("bad-name", "activity name must be a non-empty string",
                               path=f"{apath}.name"))
            aname = aid
            good = False
        elif not registry.has_activity(aname):
            diags.append(warning(
                "activity-name",
                f"activity name {aname!r} is not in the catalog; treating as free-form",
                path=f"{apath}.name"))
        depends = tuple(a.get("depends_on", ()))
        service = _build_spec(a.get("service", {}), which="service",
                              path=f"{apath}.service", registry=registry, diags=diags)
        resource = _build_spec(a.get("resource", {}), which="resource",
                               path=f"{apath}.resource", registry=registry, diags=diags)
        if good and service is not None and resource is not None:
            activities.append(WorkflowActivity(id=aid, name=aname, depends_on=depends,
                                               service=service, resource=resource))

    structure_ok = len(activities) == len(raw_activities)
    if structure_ok:
        ids = [a.id for a in activities]
        known = set(ids)
        edges = {a.id: a.depends_on for a in activities}
        for i, a in enumerate(activities):
            for j, dep in enumerate(a.depends_on):
                if dep not in known:
                    diags.append(error(
                        "dangling-dependency",
                        f"activity {a.id!r} depends on unknown activity {dep!r}",
                        path=f"activities[{i}].depends_on[{j}]"))
                    structure_ok = False
        if structure_ok:
            cycle = _find_cycle(ids, edges)
            if cycle:
                diags.append(error(
                    "cycle",
                    "activity dependencies form a cycle: " + " -> ".join(cycle),
                    path="activities"))

    if has_errors(diags):
        return None, diags
    doc = SlaDocument(
        id=doc_id, name=name, description=description, sla_type=sla_type,
        application_type=application_type, start_date=start, end_date=end,
        parties=tuple(parties), application_slos=tuple(app_slos),
        activities=tuple(activities))
    return doc, diags


def topological_order(doc: SlaDocument) -> list[str]:
    """Linear extension of the dependency DAG, ties broken by id ascending."""
    indegree = {a.id: 0 for a in doc.activities}
    dependents: dict[str, list[str]] = {a.id: [] for a in doc.activities}
    for a in doc.activities:
        indegree[a.id] = len(a.depends_on)
        for dep in a.depends_on:
            dependents[dep].append(a.id)
    ready = [aid for aid, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        aid = heapq.heappop(ready)
        order.append(aid)
        for nxt in dependents[aid]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                heapq.heappush(ready, nxt)
    return order


def iter_constraints(doc: SlaDocument) -> Iterator[tuple[str, str, Constraint]]:
    """All constraints in document order as (path, scope, constraint)."""
    for i, c in enumerate(doc.application_slos):
        yield f"slos[{i}]", "application", c
    for i, a in enumerate(doc.activities):
        for which, spec in (("service", a.service), ("resource", a.resource)):
            scope_map = SERVICE_KIND_SCOPE if which == "service" else RESOURCE_KIND_SCOPE
            scope = scope_map[spec.kind]
            for j, c in enumerate(spec.slos):
                yield f"activities[{i}].{which}.slos[{j}]", scope, c
            for j, c in enumerate(spec.configuration):
                yield f"activities[{i}].{which}.configuration[{j}]", scope, c


def collect_constraints(doc: SlaDocument, scope: str = "all",
                        ) -> list[tuple[str, Constraint]]:
    """Constraints whose scope tag matches ``scope`` ("all" keeps everything)."""
    if scope != "all" and scope not in vocab.SCOPES:
        raise UsageError(f"unknown scope filter {scope!r}")
    return [(path, c) for path, s, c in iter_constraints(doc)
            if scope == "all" or s == scope]
