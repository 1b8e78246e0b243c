"""Controlled-vocabulary registry: metric definitions, units, roles, activities.

The registry externalizes every terminal word list of the SLA language
(metric names, unit symbols, party roles, the workflow-activity catalog)
into a JSON data file with a compiled-in default, so new domains can extend
the vocabulary without code changes.  Metric names are matched
case-insensitively with internal whitespace runs collapsed.

Unit conversion is linear: each unit carries an exact rational factor to the
canonical unit of its dimension (millisecond, percent, kilobyte, per-second,
unit, USD).  Calendar-flavored time units convert deterministically at
30 days per month and 365 days per year.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources

from .diagnostics import Diagnostic, error

METRIC_KINDS = ("performance", "boolean", "type", "numerical")
DIMENSIONS = ("time", "percentage", "data_size", "rate", "count", "currency",
              "dimensionless")
TENDENCIES = ("higher_is_better", "lower_is_better", "exact")

SCOPES = ("application", "sensing", "networking", "ingestion",
          "stream_processing", "batch_processing", "machine_learning",
          "sql_db", "nosql_db", "iot_device", "edge", "cloud")

SERVICE_KINDS = ("sensing", "networking", "ingestion", "stream_processing",
                 "batch_processing", "machine_learning", "database_sql",
                 "database_nosql")
RESOURCE_KINDS = ("iot_device", "edge", "cloud")

# Scope tag each service/resource kind validates its constraints under.
SERVICE_KIND_SCOPE = {
    "sensing": "sensing",
    "networking": "networking",
    "ingestion": "ingestion",
    "stream_processing": "stream_processing",
    "batch_processing": "batch_processing",
    "machine_learning": "machine_learning",
    "database_sql": "sql_db",
    "database_nosql": "nosql_db",
}
RESOURCE_KIND_SCOPE = {k: k for k in RESOURCE_KINDS}

CANONICAL_UNITS = {
    "time": "millisecond",
    "percentage": "percent",
    "data_size": "kilobyte",
    "rate": "per-second",
    "count": "unit",
    "currency": "USD",
}

DEFAULT_MARKER = "default"

# Unit symbols must survive the DSL lexer as single tokens.
_SYMBOL_RE = re.compile(r"^%$|^[A-Za-z][A-Za-z0-9_-]*$")


class VocabularyError(Exception):
    """Base for registry lookup and load failures."""

    def __init__(self, message: str, diagnostic: Diagnostic | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic or error("vocabulary", message)


class RegistryFormatError(VocabularyError):
    """Registry document is malformed; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        super().__init__(message, error("registry-format", message))


class DuplicateDefinitionError(VocabularyError):
    def __init__(self, term: str, what: str):
        self.term = term
        super().__init__(
            f"duplicate {what} definition: {term!r}",
            error("duplicate-definition", f"duplicate {what} definition: {term!r}"))


class UnknownMetricError(VocabularyError):
    def __init__(self, name: str, suggestion: str | None):
        self.name = name
        self.suggestion = suggestion
        msg = f"unknown metric {name!r}"
        if suggestion:
            msg += f" (did you mean {suggestion!r}?)"
        super().__init__(msg, error("unknown-metric", msg))


class ScopeMismatchError(VocabularyError):
    def __init__(self, name: str, scope: str, valid_scopes: tuple[str, ...]):
        self.name = name
        self.scope = scope
        self.valid_scopes = valid_scopes
        msg = (f"metric {name!r} is not applicable to scope {scope!r}; "
               f"valid scopes: {', '.join(valid_scopes)}")
        super().__init__(msg, error("scope-mismatch", msg))


class UnknownUnitError(VocabularyError):
    def __init__(self, symbol: str):
        self.symbol = symbol
        msg = f"unknown unit {symbol!r}"
        super().__init__(msg, error("unknown-unit", msg))


def normalize_name(name: str) -> str:
    """Lookup key for metric names: lowercase, internal space runs collapsed."""
    return " ".join(name.split()).lower()


@dataclass(frozen=True)
class MetricDef:
    """One vocabulary metric: value kind, unit dimension, and applicability."""

    name: str
    kind: str
    dimension: str
    tendency: str
    applicability: tuple[str, ...]
    allowed_values: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in METRIC_KINDS:
            raise RegistryFormatError(f"metric {self.name!r}: bad kind {self.kind!r}")
        if self.dimension not in DIMENSIONS:
            raise RegistryFormatError(
                f"metric {self.name!r}: bad dimension {self.dimension!r}")
        if self.tendency not in TENDENCIES:
            raise RegistryFormatError(
                f"metric {self.name!r}: bad tendency {self.tendency!r}")
        bad_scopes = [s for s in self.applicability if s not in SCOPES]
        if bad_scopes or not self.applicability:
            raise RegistryFormatError(
                f"metric {self.name!r}: bad applicability {bad_scopes or '(empty)'}")
        if self.kind == "boolean":
            if self.dimension != "dimensionless" or self.allowed_values is not None:
                raise RegistryFormatError(
                    f"metric {self.name!r}: boolean metrics are dimensionless "
                    "and carry no allowed values")
        if self.kind == "type" and not self.allowed_values:
            raise RegistryFormatError(
                f"metric {self.name!r}: type metrics need allowed values")

    @property
    def key(self) -> str:
        return normalize_name(self.name)


@dataclass(frozen=True)
class UnitDef:
    """One unit symbol with its exact factor to the dimension's canonical unit."""

    symbol: str
    dimension: str
    factor_to_canonical: Fraction

    def __post_init__(self) -> None:
        if self.dimension not in DIMENSIONS or self.dimension == "dimensionless":
            raise RegistryFormatError(f"unit {self.symbol!r}: bad dimension")
        if self.factor_to_canonical <= 0:
            raise RegistryFormatError(f"unit {self.symbol!r}: factor must be positive")
        if not _SYMBOL_RE.match(self.symbol):
            raise RegistryFormatError(
                f"unit symbol {self.symbol!r} is not lexable; use letters, "
                "digits, '_' or '-' (or the single symbol '%')")


@dataclass(frozen=True)
class VocabularyRegistry:
    """Immutable term registry; safe to share across threads after load."""

    metrics: tuple[MetricDef, ...]
    units: tuple[UnitDef, ...]
    roles: tuple[str, ...]
    activities: tuple[str, ...]
    service_kinds: tuple[str, ...] = SERVICE_KINDS
    resource_kinds: tuple[str, ...] = RESOURCE_KINDS

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for m in self.metrics:
            if m.key in seen:
                raise DuplicateDefinitionError(m.name, "metric")
            seen.add(m.key)
        seen_units: set[str] = set()
        for u in self.units:
            if u.symbol in seen_units:
                raise DuplicateDefinitionError(u.symbol, "unit")
            seen_units.add(u.symbol)

    @cached_property
    def _metric_map(self) -> dict[str, MetricDef]:
        return {m.key: m for m in self.metrics}

    @cached_property
    def _unit_map(self) -> dict[str, UnitDef]:
        return {u.symbol: u for u in self.units}

    @cached_property
    def _role_keys(self) -> set[str]:
        return {normalize_name(r) for r in self.roles}

    @cached_property
    def _activity_keys(self) -> set[str]:
        return {normalize_name(a) for a in self.activities}

    def metric(self, name: str) -> MetricDef:
        key = normalize_name(name)
        found = self._metric_map.get(key)
        if found is None:
            raise UnknownMetricError(name, self._suggest(key))
        return found

    def resolve_metric(self, name: str, scope: str) -> MetricDef:
        """Metric by case-insensitive name, checked for scope applicability."""
        found = self.metric(name)
        if scope not in found.applicability:
            raise ScopeMismatchError(found.name, scope, found.applicability)
        return found

    def unit(self, symbol: str) -> UnitDef:
        found = self._unit_map.get(symbol)
        if found is None:
            raise UnknownUnitError(symbol)
        return found

    def has_role(self, role: str) -> bool:
        return normalize_name(role) in self._role_keys

    def has_activity(self, name: str) -> bool:
        return normalize_name(name) in self._activity_keys

    def units_for_dimension(self, dimension: str) -> tuple[UnitDef, ...]:
        return tuple(u for u in self.units if u.dimension == dimension)

    def _suggest(self, key: str) -> str | None:
        best: tuple[int, str] | None = None
        for m in self.metrics:
            d = _edit_distance(key, m.key, limit=2)
            if d is not None and (best is None or (d, m.name) < best):
                best = (d, m.name)
        return best[1] if best else None

    def to_file_dict(self) -> dict:
        """Registry-file representation (the load_registry input format)."""
        metrics = []
        for m in self.metrics:
            entry: dict = {
                "name": m.name,
                "kind": m.kind,
                "dimension": m.dimension,
                "tendency": m.tendency,
                "applicability": list(m.applicability),
            }
            if m.allowed_values is not None:
                entry["allowedValues"] = list(m.allowed_values)
            metrics.append(entry)
        units = [{"symbol": u.symbol, "dimension": u.dimension,
                  "factor": _factor_out(u.factor_to_canonical)}
                 for u in self.units]
        return {"metrics": metrics, "units": units,
                "roles": list(self.roles), "activities": list(self.activities)}


def _edit_distance(a: str, b: str, limit: int) -> int | None:
    """Levenshtein distance, or None when it exceeds ``limit``."""
    if abs(len(a) - len(b)) > limit:
        return None
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        if min(cur) > limit:
            return None
        prev = cur
    return prev[-1] if prev[-1] <= limit else None


def _factor_in(raw, symbol: str) -> Fraction:
    if isinstance(raw, bool):
        raise RegistryFormatError(f"unit {symbol!r}: factor must be a number")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return Fraction(str(raw))
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise RegistryFormatError(f"unit {symbol!r}: bad factor {raw!r}") from None
    raise RegistryFormatError(f"unit {symbol!r}: bad factor {raw!r}")


def _factor_out(f: Fraction) -> int | str:
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def normalize(value: int | float, unit: UnitDef) -> tuple[int | float, str]:
    """Convert ``value`` in ``unit`` to the dimension's canonical unit.

    Returns ``(converted value, canonical unit name)``.  Integral results
    come back as int so canonical emission never shows trailing zeros.
    Idempotent: canonical units convert with factor 1.
    """
    exact = Fraction(value) * unit.factor_to_canonical
    out: int | float
    if exact.denominator == 1:
        out = int(exact)
    else:
        out = float(exact)
    return out, CANONICAL_UNITS[unit.dimension]


def _require_keys(obj: dict, required: tuple[str, ...], optional: tuple[str, ...],
                  what: str) -> None:
    for k in required:
        if k not in obj:
            raise RegistryFormatError(f"{what}: missing key {k!r}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise RegistryFormatError(f"{what}: unknown key {sorted(unknown)[0]!r}")


def load_registry(source: str) -> VocabularyRegistry:
    """Build a registry from registry-file content.

    The distinguished marker ``"default"`` returns the built-in registry.
    Malformed documents raise :class:`RegistryFormatError` with line/column;
    repeated metric names or unit symbols raise
    :class:`DuplicateDefinitionError` naming the term.
    """
    if source == DEFAULT_MARKER:
        return default_registry()
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise RegistryFormatError(
            f"registry is not valid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise RegistryFormatError("registry root must be an object")
    _require_keys(data, ("metrics", "units", "roles", "activities"), (), "registry")

    metrics = []
    for i, entry in enumerate(data["metrics"]):
        what = f"metrics[{i}]"
        if not isinstance(entry, dict):
            raise RegistryFormatError(f"{what}: must be an object")
        _require_keys(entry, ("name", "kind", "dimension", "tendency", "applicability"),
                      ("allowedValues",), what)
        allowed = entry.get("allowedValues")
        metrics.append(MetricDef(
            name=str(entry["name"]),
            kind=str(entry["kind"]),
            dimension=str(entry["dimension"]),
            tendency=str(entry["tendency"]),
            applicability=tuple(entry["applicability"]),
            allowed_values=tuple(str(v) for v in allowed) if allowed is not None else None,
        ))

    units = []
    for i, entry in enumerate(data["units"]):
        what = f"units[{i}]"
        if not isinstance(entry, dict):
            raise RegistryFormatError(f"{what}: must be an object")
        _require_keys(entry, ("symbol", "dimension", "factor"), (), what)
        units.append(UnitDef(
            symbol=str(entry["symbol"]),
            dimension=str(entry["dimension"]),
            factor_to_canonical=_factor_in(entry["factor"], str(entry["symbol"])),
        ))

    roles = tuple(str(r) for r in data["roles"])
    activities = tuple(str(a) for a in data["activities"])
    registry = VocabularyRegistry(tuple(metrics), tuple(units), roles, activities)

    # Every dimension in use must have a loadable canonical unit so that
    # normalization is closed (normalize(normalize(v, u)) is well-defined).
    for u in registry.units:
        canonical = CANONICAL_UNITS[u.dimension]
        if canonical not in registry._unit_map:
            raise RegistryFormatError(
                f"dimension {u.dimension!r} has units but no canonical unit "
                f"{canonical!r} is defined")
    return registry


def dump_registry(registry: VocabularyRegistry) -> str:
    """Canonical registry-file text (2-space indent, trailing newline)."""
    return json.dumps(registry.to_file_dict(), indent=2, ensure_ascii=False) + "\n"


_default: VocabularyRegistry | None = None


def default_registry() -> VocabularyRegistry:
    """The built-in registry, loaded once from packaged data."""
    global _default
    if _default is None:
        text = resources.files("slaiot").joinpath("vocab/default.json").read_text("utf-8")
        _default = load_registry(text)
    return _default


def load_registry_file(path: str) -> VocabularyRegistry:
    with open(path, "r", encoding="utf-8") as fh:
        return load_registry(fh.read())


def resolve_metric(registry: VocabularyRegistry, name: str, scope: str) -> MetricDef:
    """Free-function form of :meth:`VocabularyRegistry.resolve_metric`."""
    return registry.resolve_metric(name, scope)
