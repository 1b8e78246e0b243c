"""Deterministic pseudo-random document generator for property testing.

Every generated document is valid by construction: constraints are drawn
only from registry-valid (metric, comparator, value, unit) combinations,
and dependency edges only point at earlier activities so the graph is
always acyclic.  The same seed always yields the same document.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from .model import COMPARATORS, PRIORITIES, SlaDocument, build_document
from .vocabulary import (MetricDef, VocabularyRegistry,
                         RESOURCE_KIND_SCOPE, SERVICE_KIND_SCOPE)

_APPLICATIONS = ("smart health", "smart city", "smart home",
                 "environmental monitoring", "smart agriculture")
_DESCRIPTIONS = ("remote monitoring pipeline", "event-driven control loop",
                 "periodic analytics workload", "alerting service")
_PARTY_NAMES = ("Acme Cloud", "Northern Health Trust", "CivicSense Ltd",
                "Gateway Networks", "Metro Council")


def _value_for(rng: random.Random, mdef: MetricDef,
               units: tuple, unit) -> int | float:
    if mdef.dimension == "percentage":
        raw = rng.choice([rng.randrange(0, 101), round(rng.uniform(0, 100), 1)])
        return raw
    if rng.random() < 0.7:
        return rng.randrange(0, 10_001)
    return round(rng.uniform(0, 1000), 2)


def _constraint_for(rng: random.Random, mdef: MetricDef,
                    registry: VocabularyRegistry, position: str) -> dict:
    part: dict = {"metric": mdef.name}
    if mdef.kind == "boolean":
        part["comparator"] = "eq"
        part["value"] = rng.random() < 0.5
        return part
    if mdef.kind == "type":
        part["comparator"] = "eq"
        part["value"] = rng.choice(mdef.allowed_values)
        return part
    part["comparator"] = rng.choice(COMPARATORS)
    units = registry.units_for_dimension(mdef.dimension)
    unit = rng.choice(units) if units and rng.random() < 0.7 else None
    if unit is not None:
        part["unit"] = unit.symbol
    part["value"] = _value_for(rng, mdef, units, unit)
    if mdef.kind == "performance":
        part["priority"] = rng.choice(PRIORITIES)
    return part


def _metrics_for(registry: VocabularyRegistry, scope: str,
                 position: str) -> list[MetricDef]:
    kinds = ("performance", "boolean") if position == "slo" else (
        "boolean", "type", "numerical")
    return [m for m in registry.metrics
            if scope in m.applicability and m.kind in kinds]


def _spec_parts(rng: random.Random, kind: str, scope: str,
                registry: VocabularyRegistry) -> dict:
    slo_pool = _metrics_for(registry, scope, "slo")
    config_pool = _metrics_for(registry, scope, "config")
    n_slos = rng.randrange(0, min(3, len(slo_pool)) + 1) if slo_pool else 0
    n_config = rng.randrange(0, min(3, len(config_pool)) + 1) if config_pool else 0
    return {
        "kind": kind,
        "slos": [_constraint_for(rng, m, registry, "slo")
                 for m in rng.sample(slo_pool, n_slos)],
        "configuration": [_constraint_for(rng, m, registry, "config")
                          for m in rng.sample(config_pool, n_config)],
    }


def generate_document(seed: int, registry: VocabularyRegistry,
                      sla_type: str | None = None) -> SlaDocument:
    """Valid pseudo-random document for ``seed`` (1-5 SLOs, 0-6 activities)."""
    rng = random.Random(seed)
    parts: dict = {
        "id": f"sla-{seed}-{rng.randrange(10_000)}",
        "description": rng.choice(_DESCRIPTIONS),
        "sla_type": sla_type or rng.choice(("offer", "request")),
        "application_type": rng.choice(_APPLICATIONS),
    }
    if rng.random() < 0.3:
        parts["name"] = f"Agreement {rng.randrange(100)}"
    start = date(2025, 1, 1) + timedelta(days=rng.randrange(0, 730))
    parts["start_date"] = start
    parts["end_date"] = start + timedelta(days=rng.randrange(1, 366))

    parts["parties"] = [
        {"id": f"p{i}", "name": rng.choice(_PARTY_NAMES),
         "roles": rng.sample(registry.roles, rng.randrange(1, 3))}
        for i in range(rng.randrange(0, 4))
    ]

    app_pool = _metrics_for(registry, "application", "slo")
    parts["slos"] = [_constraint_for(rng, m, registry, "slo")
                     for m in rng.sample(app_pool, rng.randrange(1, 6))]

    activities = []
    ids: list[str] = []
    for i in range(rng.randrange(0, 7)):
        aid = f"a{i}-{rng.randrange(100)}"
        depends = [other for other in ids if rng.random() < 0.35][:3]
        name = (rng.choice(registry.activities) if rng.random() < 0.85
                else f"custom step {i}")
        service_kind = rng.choice(registry.service_kinds)
        resource_kind = rng.choice(registry.resource_kinds)
        activities.append({
            "id": aid,
            "name": name,
            "depends_on": depends,
            "service": _spec_parts(rng, service_kind,
                                   SERVICE_KIND_SCOPE[service_kind], registry),
            "resource": _spec_parts(rng, resource_kind,
                                    RESOURCE_KIND_SCOPE[resource_kind], registry),
        })
        ids.append(aid)
    parts["activities"] = activities

    doc, diags = build_document(parts, registry)
    if doc is None:
        raise AssertionError(
            f"generator produced an invalid document for seed {seed}: "
            + "; ".join(d.message for d in diags))
    return doc
