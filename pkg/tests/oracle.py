"""Independent brute-force oracles used by the matcher tests.

Containment is re-decided by dense sampling over the normalized value axis
(10^4 grid points plus the exact thresholds and their float neighbors),
never by the engine's interval algebra.  Correspondence, weights, and
scores are likewise recomputed with plain loops over the document fields.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from slaiot.model import Constraint, SlaDocument
from slaiot.vocabulary import VocabularyRegistry, normalize_name

GRID_POINTS = 10_000


def normalized_float(c: Constraint, registry: VocabularyRegistry) -> float:
    factor = registry.unit(c.unit).factor_to_canonical if c.unit else Fraction(1)
    return float(Fraction(c.value) * factor)


def _admits(comparator: str, threshold: float, xs: np.ndarray,
            hi: float | None) -> np.ndarray:
    base = {
        "gt": xs > threshold,
        "gte": xs >= threshold,
        "lt": xs < threshold,
        "lte": xs <= threshold,
        "eq": xs == threshold,
        "neq": xs != threshold,
    }[comparator]
    domain = xs >= 0
    if hi is not None:
        domain &= xs <= hi
    return base & domain


def sampled_satisfies(offer_c: Constraint, request_c: Constraint,
                      registry: VocabularyRegistry) -> bool:
    """Dense-sampling containment check (the test-side truth)."""
    if request_c.kind in ("boolean", "type"):
        return offer_c.value == request_c.value
    t_offer = normalized_float(offer_c, registry)
    t_request = normalized_float(request_c, registry)
    mdef = registry.metric(request_c.metric)
    hi = 100.0 if mdef.dimension == "percentage" else None
    upper = hi if hi is not None else max(t_offer, t_request, 1.0) * 2 + 10
    specials = []
    for t in (t_offer, t_request):
        specials += [t, np.nextafter(t, -np.inf), np.nextafter(t, np.inf)]
    xs = np.concatenate([np.linspace(0.0, upper, GRID_POINTS),
                         np.asarray(specials + [upper])])
    xs = np.unique(xs[xs >= 0])
    offer_mask = _admits(offer_c.comparator, t_offer, xs, hi)
    request_mask = _admits(request_c.comparator, t_request, xs, hi)
    return not bool(np.any(offer_mask & ~request_mask))


def walk_constraints(doc: SlaDocument):
    """(scope key, path, constraint) triples by straightforward re-walk."""
    out = []
    for i, c in enumerate(doc.application_slos):
        out.append((("application",), f"slos[{i}]", c))
    for i, a in enumerate(doc.activities):
        for side in ("service", "resource"):
            spec = a.service if side == "service" else a.resource
            key = (normalize_name(a.name), side, spec.kind)
            for j, c in enumerate(spec.slos):
                out.append((key, f"activities[{i}].{side}.slos[{j}]", c))
            for j, c in enumerate(spec.configuration):
                out.append((key, f"activities[{i}].{side}.configuration[{j}]", c))
    return out


def oracle_match(offer: SlaDocument, request: SlaDocument,
                 registry: VocabularyRegistry,
                 weights: dict[str, int] | None = None):
    """Recompute statuses, score, and hard_pass with plain loops."""
    weights = weights or {"high": 3, "medium": 2, "low": 1}
    offer_side = walk_constraints(offer)
    statuses = []
    total = satisfied = 0
    hard_pass = True
    for key, _path, rc in walk_constraints(request):
        found = None
        for okey, opath, oc in offer_side:
            if okey == key and normalize_name(oc.metric) == normalize_name(rc.metric):
                found = oc
                break
        weight = weights[rc.priority] if rc.priority is not None else 1
        total += weight
        if found is None:
            status = "unspecified"
        elif sampled_satisfies(found, rc, registry):
            status = "satisfied"
            satisfied += weight
        else:
            status = "violated"
        if status != "satisfied" and rc.priority in (None, "high"):
            hard_pass = False
        statuses.append(status)
    score = Fraction(satisfied, total) if total else Fraction(1)
    return statuses, score, hard_pass
