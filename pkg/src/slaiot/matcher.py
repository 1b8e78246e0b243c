"""Offer/request comparison: per-constraint verdicts, scoring, and ranking.

A numerical constraint denotes the set of values it admits after unit
normalization, clamped to the metric's domain ([0, inf), or [0, 100] for
percentages):

    gt t  -> (t, inf)      gte t -> [t, inf)     eq t -> {t}
    lt t  -> [0, t)        lte t -> [0, t]       neq t -> domain minus {t}

An offer constraint satisfies a request constraint iff its admissible set
is contained in the request's set; boolean and type constraints satisfy on
value equality.  Containment is computed exactly over rationals, so the
verdict never depends on the unit either side chose.

Note that an offer stating ``neq`` admits everything else in the domain, so
it can only satisfy a request stating ``neq`` with the same value; this is
documented behavior, not a bug.

Scoring weighs each request constraint by priority (high=3, medium=2,
low=1; constraints without a priority weigh 1).  ``hard_pass`` requires
every high-priority and every unprioritized request constraint to be
satisfied.  Offer-only constraints are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Constraint, SlaDocument, UsageError, iter_constraints
from .vocabulary import CANONICAL_UNITS, VocabularyRegistry, normalize_name

DEFAULT_WEIGHTS = {"high": 3, "medium": 2, "low": 1}

_INF = Fraction(10) ** 60  # stand-in for +infinity; beyond any normalized value


class IncomparableError(Exception):
    """The two constraints cannot be compared (unit/kind disagreement)."""


@dataclass(frozen=True)
class ConstraintVerdict:
    request_path: str
    status: str                    # "satisfied" | "violated" | "unspecified"
    offer_path: str | None
    detail: str

    def to_dict(self) -> dict:
        out = {"requestPath": self.request_path, "status": self.status}
        if self.offer_path is not None:
            out["offerPath"] = self.offer_path
        out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class MatchReport:
    offer_id: str
    request_id: str
    verdicts: tuple[ConstraintVerdict, ...]
    score: Fraction
    hard_pass: bool

    def to_dict(self) -> dict:
        return {
            "offerId": self.offer_id,
            "requestId": self.request_id,
            "hardPass": self.hard_pass,
            "score": float(self.score),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


@dataclass(frozen=True)
class _AdmissibleSet:
    """Interval with open/closed bounds plus at most one excluded point."""

    lo: Fraction
    lo_open: bool
    hi: Fraction
    hi_open: bool
    excluded: Fraction | None = None

    def normalized(self) -> "_AdmissibleSet":
        s = self
        if s.excluded is not None:
            if not s.contains_point(s.excluded):
                s = _AdmissibleSet(s.lo, s.lo_open, s.hi, s.hi_open, None)
            elif s.excluded == s.lo and not s.lo_open:
                s = _AdmissibleSet(s.lo, True, s.hi, s.hi_open, None)
            elif s.excluded == s.hi and not s.hi_open:
                s = _AdmissibleSet(s.lo, s.lo_open, s.hi, True, None)
        return s

    @property
    def empty(self) -> bool:
        s = self.normalized()
        if s.lo > s.hi:
            return True
        if s.lo == s.hi and (s.lo_open or s.hi_open):
            return True
        return False

    def contains_point(self, x: Fraction) -> bool:
        if x < self.lo or (x == self.lo and self.lo_open):
            return False
        if x > self.hi or (x == self.hi and self.hi_open):
            return False
        return True

    def contains_interval(self, other: "_AdmissibleSet") -> bool:
        """Interval-part containment: other's interval inside self's interval."""
        if other.lo < self.lo or (other.lo == self.lo and self.lo_open
                                  and not other.lo_open):
            return False
        if other.hi > self.hi or (other.hi == self.hi and self.hi_open
                                  and not other.hi_open):
            return False
        return True


def _subset(a: _AdmissibleSet, b: _AdmissibleSet) -> bool:
    a = a.normalized()
    b = b.normalized()
    if a.empty:
        return True
    if a.excluded is not None:
        # a splits into two plain intervals around the excluded point
        left = _AdmissibleSet(a.lo, a.lo_open, a.excluded, True)
        right = _AdmissibleSet(a.excluded, True, a.hi, a.hi_open)
        return _subset(left, b) and _subset(right, b)
    if not b.contains_interval(a):
        return False
    if b.excluded is not None and a.contains_point(b.excluded):
        return False
    return True


def _normalized_value(c: Constraint, registry: VocabularyRegistry) -> Fraction:
    value = Fraction(c.value)
    if c.unit is None:
        return value
    return value * registry.unit(c.unit).factor_to_canonical


def admissible_set(c: Constraint, registry: VocabularyRegistry) -> _AdmissibleSet:
    """The set of metric values the constraint admits, in canonical units."""
    mdef = registry.metric(c.metric)
    hi = Fraction(100) if mdef.dimension == "percentage" else _INF
    domain = _AdmissibleSet(Fraction(0), False, hi, False)
    t = _normalized_value(c, registry)
    if c.comparator == "gt":
        return _AdmissibleSet(t, True, domain.hi, domain.hi_open)
    if c.comparator == "gte":
        return _AdmissibleSet(t, False, domain.hi, domain.hi_open)
    if c.comparator == "lt":
        return _AdmissibleSet(domain.lo, domain.lo_open, t, True)
    if c.comparator == "lte":
        return _AdmissibleSet(domain.lo, domain.lo_open, t, False)
    if c.comparator == "eq":
        return _AdmissibleSet(t, False, t, False)
    if c.comparator == "neq":
        return _AdmissibleSet(domain.lo, domain.lo_open, domain.hi,
                              domain.hi_open, excluded=t)
    raise UsageError(f"unknown comparator {c.comparator!r}")


def _check_comparable(offer_c: Constraint, request_c: Constraint,
                      registry: VocabularyRegistry) -> None:
    mdef = registry.metric(request_c.metric)
    if registry.metric(offer_c.metric) is not mdef:
        raise IncomparableError(
            f"constraints refer to different metrics "
            f"({offer_c.metric!r} vs {request_c.metric!r})")
    for c in (offer_c, request_c):
        if c.unit is not None and registry.unit(c.unit).dimension != mdef.dimension:
            raise IncomparableError(
                f"unit {c.unit!r} does not measure {mdef.dimension} "
                f"as metric {mdef.name!r} requires")


def constraint_satisfies(offer_c: Constraint, request_c: Constraint,
                         registry: VocabularyRegistry) -> bool:
    """True iff every value the offer admits is admitted by the request.

    Both constraints must refer to the same metric.  Raises
    :class:`IncomparableError` on unit-dimension disagreement (match()
    surfaces that as a violated verdict).
    """
    _check_comparable(offer_c, request_c, registry)
    if request_c.kind in ("boolean", "type"):
        return offer_c.value == request_c.value
    offer_set = admissible_set(offer_c, registry)
    request_set = admissible_set(request_c, registry)
    return _subset(offer_set, request_set)


def _describe(c: Constraint, registry: VocabularyRegistry) -> str:
    if isinstance(c.value, bool):
        return f"{c.metric} = {'true' if c.value else 'false'}"
    if isinstance(c.value, str):
        return f"{c.metric} = {c.value!r}"
    t = _normalized_value(c, registry)
    shown = int(t) if t.denominator == 1 else float(t)
    mdef = registry.metric(c.metric)
    unit = CANONICAL_UNITS.get(mdef.dimension, "")
    suffix = f" {unit}" if unit else ""
    return f"{c.metric} {c.comparator} {shown}{suffix}"


def _scope_key(path: str, scope: str, doc: SlaDocument) -> tuple:
    """Correspondence key: application level, or (activity name, side, kind)."""
    if path.startswith("slos["):
        return ("application",)
    index = int(path.split("[", 1)[1].split("]", 1)[0])
    activity = doc.activities[index]
    side = "service" if ".service." in path else "resource"
    spec = activity.service if side == "service" else activity.resource
    return (normalize_name(activity.name), side, spec.kind)


def _weight(c: Constraint, weights: dict[str, int]) -> int:
    if c.kind == "performance" and c.priority is not None:
        return weights[c.priority]
    return 1


def match(offer: SlaDocument, request: SlaDocument, registry: VocabularyRegistry,
          weights: dict[str, int] | None = None) -> MatchReport:
    """Evaluate one offer against one request, constraint by constraint.

    Correspondence is by scope and metric: application SLOs pair with
    application SLOs; nested constraints pair when activity name (matched
    like metric names), side (service/resource), and kind all agree.  When
    an offer states several constraints on the same metric in one scope,
    the first in document order is used.
    """
    if offer.sla_type != "offer":
        raise UsageError(f"document {offer.id!r} is not an offer")
    if request.sla_type != "request":
        raise UsageError(f"document {request.id!r} is not a request")
    weights = weights or DEFAULT_WEIGHTS

    offer_index: dict[tuple, list[tuple[str, Constraint]]] = {}
    for path, _scope, c in iter_constraints(offer):
        key = _scope_key(path, _scope, offer)
        offer_index.setdefault(key, []).append((path, c))

    verdicts: list[ConstraintVerdict] = []
    total = 0
    satisfied_weight = 0
    hard_pass = True
    for path, _scope, rc in iter_constraints(request):
        key = _scope_key(path, _scope, request)
        candidates = offer_index.get(key, ())
        found = next(((p, c) for p, c in candidates
                      if normalize_name(c.metric) == normalize_name(rc.metric)), None)
        w = _weight(rc, weights)
        total += w
        if found is None:
            verdicts.append(ConstraintVerdict(
                request_path=path, status="unspecified", offer_path=None,
                detail=f"offer does not specify {rc.metric!r} "
                       f"(request wants {_describe(rc, registry)})"))
            status = "unspecified"
        else:
            offer_path, oc = found
            try:
                ok = constraint_satisfies(oc, rc, registry)
                detail = (f"offer guarantees {_describe(oc, registry)}; "
                          f"request requires {_describe(rc, registry)}")
            except IncomparableError as exc:
                ok = False
                detail = f"incomparable: {exc}"
            status = "satisfied" if ok else "violated"
            verdicts.append(ConstraintVerdict(
                request_path=path, status=status, offer_path=offer_path,
                detail=detail))
            if ok:
                satisfied_weight += w
        if status != "satisfied" and (rc.priority == "high" or rc.priority is None):
            hard_pass = False

    score = Fraction(satisfied_weight, total) if total else Fraction(1)
    return MatchReport(offer_id=offer.id, request_id=request.id,
                       verdicts=tuple(verdicts), score=score, hard_pass=hard_pass)


def rank_offers(offers: list[SlaDocument], request: SlaDocument,
                registry: VocabularyRegistry,
                weights: dict[str, int] | None = None) -> list[MatchReport]:
    """Match every offer and sort by (hard_pass, score) descending, id ascending."""
    reports = [match(o, request, registry, weights) for o in offers]
    reports.sort(key=lambda r: (not r.hard_pass, -r.score, r.offer_id))
    return reports
