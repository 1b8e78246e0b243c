import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from slaiot import vocabulary as vocab
from slaiot.vocabulary import (CANONICAL_UNITS, DuplicateDefinitionError,
                               RegistryFormatError, ScopeMismatchError,
                               UnknownMetricError, default_registry,
                               dump_registry, load_registry, normalize,
                               resolve_metric)

ROOT = Path(__file__).resolve().parents[1]


def test_default_marker_returns_builtin(registry):
    assert load_registry("default") is registry


def test_default_has_response_time(registry):
    m = registry.metric("Response Time")
    assert m.kind == "performance"
    assert m.dimension == "time"
    assert m.tendency == "lower_is_better"


def test_default_has_encryption_support(registry):
    m = registry.metric("Encryption Support")
    assert m.kind == "boolean"
    assert m.dimension == "dimensionless"
    assert m.allowed_values is None


def test_service_and_resource_kind_lists(registry):
    assert registry.service_kinds == (
        "sensing", "networking", "ingestion", "stream_processing",
        "batch_processing", "machine_learning", "database_sql", "database_nosql")
    assert registry.resource_kinds == ("iot_device", "edge", "cloud")


def test_seed_roles_present(registry):
    for role in ("Cloud Provider", "Network Provider", "Sensing Provider",
                 "Broker", "IoT administrator", "End User"):
        assert registry.has_role(role)


def test_duplicate_unit_symbol_rejected():
    doc = {
        "metrics": [],
        "units": [
            {"symbol": "ms", "dimension": "time", "factor": 1},
            {"symbol": "millisecond", "dimension": "time", "factor": 1},
            {"symbol": "ms", "dimension": "time", "factor": 1},
        ],
        "roles": [], "activities": [],
    }
    with pytest.raises(DuplicateDefinitionError) as exc:
        load_registry(json.dumps(doc))
    assert "ms" in str(exc.value)


def test_duplicate_metric_name_is_case_insensitive():
    doc = {
        "metrics": [
            {"name": "Response Time", "kind": "performance", "dimension": "time",
             "tendency": "lower_is_better", "applicability": ["application"]},
            {"name": "response   time", "kind": "performance", "dimension": "time",
             "tendency": "lower_is_better", "applicability": ["application"]},
        ],
        "units": [], "roles": [], "activities": [],
    }
    with pytest.raises(DuplicateDefinitionError):
        load_registry(json.dumps(doc))


def test_malformed_registry_reports_position():
    with pytest.raises(RegistryFormatError) as exc:
        load_registry('{"metrics": [,]}')
    assert exc.value.line == 1
    assert exc.value.col is not None


def test_registry_unknown_key_rejected():
    with pytest.raises(RegistryFormatError):
        load_registry(json.dumps(
            {"metrics": [], "units": [], "roles": [], "activities": [],
             "extras": []}))


def test_resolve_data_freshness_for_sensing(registry):
    m = resolve_metric(registry, "Data Freshness", "sensing")
    assert m.kind == "performance"


def test_resolve_cpu_utilization_for_cloud(registry):
    m = resolve_metric(registry, "CPU Utilization", "cloud")
    assert m.kind == "performance"
    assert m.dimension == "percentage"


def test_resolve_wrong_scope_lists_valid_scopes(registry):
    with pytest.raises(ScopeMismatchError) as exc:
        resolve_metric(registry, "Data Freshness", "cloud")
    assert exc.value.valid_scopes == ("sensing",)


def test_unknown_metric_suggests_nearest(registry):
    with pytest.raises(UnknownMetricError) as exc:
        registry.metric("Respones Time")
    assert exc.value.suggestion == "Response Time"


def test_unknown_metric_without_close_match_has_no_suggestion(registry):
    with pytest.raises(UnknownMetricError) as exc:
        registry.metric("Quantum Flux Capacity")
    assert exc.value.suggestion is None


def test_metric_lookup_normalizes_whitespace_and_case(registry):
    assert registry.metric("  response    TIME ").name == "Response Time"


def test_normalize_examples(registry):
    assert normalize(5, registry.unit("minutes")) == (300000, "millisecond")
    assert normalize(80, registry.unit("%")) == (80, "percent")
    assert normalize(1, registry.unit("hour")) == (3600000, "millisecond")


def test_month_and_year_convert_at_30_and_365_days(registry):
    assert normalize(1, registry.unit("month")) == (30 * 86400000, "millisecond")
    assert normalize(1, registry.unit("year")) == (365 * 86400000, "millisecond")


@given(value=st.one_of(st.integers(min_value=0, max_value=10**9),
                       st.floats(min_value=0, max_value=10**9,
                                 allow_nan=False, allow_infinity=False)))
def test_normalize_idempotent_on_every_unit(value):
    registry = default_registry()
    for unit in registry.units:
        converted, canonical_name = normalize(value, unit)
        canonical_unit = registry.unit(canonical_name)
        assert canonical_unit.factor_to_canonical == Fraction(1)
        again = normalize(converted, canonical_unit)
        assert again == (converted, canonical_name)


def test_every_metric_resolves_for_some_scope(registry):
    for m in registry.metrics:
        assert m.applicability
        resolved = resolve_metric(registry, m.name, m.applicability[0])
        assert resolved is m


def test_dump_load_round_trip(registry):
    reloaded = load_registry(dump_registry(registry))
    assert reloaded == registry


def test_repo_copy_of_default_registry_in_sync(registry):
    repo_copy = (ROOT / "vocab" / "default.json").read_text(encoding="utf-8")
    assert json.loads(repo_copy) == registry.to_file_dict()


def test_canonical_units_exist_per_used_dimension(registry):
    used = {u.dimension for u in registry.units}
    for dimension in used:
        symbol = CANONICAL_UNITS[dimension]
        assert registry.unit(symbol).factor_to_canonical == Fraction(1)


def test_unlexable_unit_symbol_rejected():
    doc = {"metrics": [],
           "units": [{"symbol": "per month", "dimension": "rate", "factor": 1},
                     {"symbol": "per-second", "dimension": "rate", "factor": 1}],
           "roles": [], "activities": []}
    with pytest.raises(RegistryFormatError):
        load_registry(json.dumps(doc))
