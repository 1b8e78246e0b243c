import json

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from slaiot.dsl import parse_text, print_text
from slaiot.generator import generate_document
from slaiot.jsoncodec import convert, document_to_obj, from_json, to_json

from conftest import SCHEMA_PATH


def must_load(text, registry):
    doc, diags = from_json(text, registry)
    assert doc is not None, [d.message for d in diags]
    return doc


def errors_of(diags):
    return [(d.code, d.path) for d in diags if d.severity == "error"]


def test_rhms_first_slo_object(registry, rhms_text, rhms_golden_text):
    doc, _ = parse_text(rhms_text, registry)
    obj = document_to_obj(doc)
    assert obj["sla"]["slos"][0] == {
        "metric": "Response Time", "kind": "performance", "priority": "high",
        "comparator": "lt", "value": 5, "unit": "minutes"}
    assert to_json(doc) == rhms_golden_text


def test_minimal_document_keeps_empty_arrays(registry):
    minimal = ('sla "m" type request {\n  description "d"\n'
               '  application "a"\n  start 2026-01-01 end 2026-12-31\n'
               '  slo "Response Time" priority high lt 5 minutes\n}\n')
    doc, _ = parse_text(minimal, registry)
    obj = json.loads(to_json(doc))
    assert obj["sla"]["parties"] == []
    assert obj["sla"]["workflowActivities"] == []
    assert "name" not in obj["sla"]


def test_to_json_injective_on_corpus(registry, corpus_paths):
    outputs = {}
    for path in corpus_paths:
        doc, _ = parse_text(path.read_text(encoding="utf-8"), registry)
        text = to_json(doc)
        assert text not in outputs.values(), f"{path.name} collides"
        outputs[path.name] = text


def test_round_trip_over_corpus(registry, corpus_paths):
    for path in corpus_paths:
        doc, _ = parse_text(path.read_text(encoding="utf-8"), registry)
        assert must_load(to_json(doc), registry) == doc, path.name


def test_cross_codec_fixed_point_over_corpus(registry, corpus_paths):
    for path in corpus_paths:
        doc, _ = parse_text(path.read_text(encoding="utf-8"), registry)
        canonical_dsl = print_text(doc)
        as_json, _ = convert(canonical_dsl, "dsl", "json", registry)
        back, _ = convert(as_json, "json", "dsl", registry)
        assert back == canonical_dsl, path.name


def test_key_order_independence(registry, rhms_golden_text):
    obj = json.loads(rhms_golden_text)
    shuffled = {"sla": dict(reversed(list(obj["sla"].items()))),
                "formatVersion": obj["formatVersion"]}
    assert must_load(json.dumps(shuffled), registry) == must_load(
        rhms_golden_text, registry)


def test_missing_priority_is_schema_diagnostic(registry, rhms_golden_text):
    obj = json.loads(rhms_golden_text)
    del obj["sla"]["slos"][0]["priority"]
    doc, diags = from_json(json.dumps(obj), registry)
    assert doc is None
    assert ("missing-key", "sla.slos[0]") in errors_of(diags)


def test_unknown_top_level_key_rejected(registry, rhms_golden_text):
    obj = json.loads(rhms_golden_text)
    obj["slaVersion"] = "2.0"
    doc, diags = from_json(json.dumps(obj), registry)
    assert doc is None
    assert ("unknown-key", "slaVersion") in errors_of(diags)


def test_nested_unknown_key_path(registry, rhms_golden_text):
    obj = json.loads(rhms_golden_text)
    obj["sla"]["workflowActivities"][0]["requiredService"]["color"] = "red"
    doc, diags = from_json(json.dumps(obj), registry)
    assert doc is None
    assert ("unknown-key",
            "sla.workflowActivities[0].requiredService.color") in errors_of(diags)


def test_malformed_json_reports_position(registry):
    doc, diags = from_json('{"formatVersion": "1.0",', registry)
    assert doc is None
    assert diags[0].code == "json-malformed"
    assert diags[0].span is not None


def test_model_error_paths_translated(registry, rhms_golden_text):
    obj = json.loads(rhms_golden_text)
    obj["sla"]["workflowActivities"][0]["requiredService"]["kind"] = "plumbing"
    doc, diags = from_json(json.dumps(obj), registry)
    assert doc is None
    assert ("bad-service-kind",
            "sla.workflowActivities[0].requiredService.kind") in errors_of(diags)


def test_model_date_error_translated(registry, rhms_golden_text):
    obj = json.loads(rhms_golden_text)
    obj["sla"]["startDate"] = "2027-06-01"
    doc, diags = from_json(json.dumps(obj), registry)
    assert doc is None
    assert ("date-order", "sla.startDate") in errors_of(diags)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**9))
def test_json_round_trip_generated(registry, seed):
    doc = generate_document(seed, registry)
    assert must_load(to_json(doc), registry) == doc


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**9))
def test_cross_codec_commutativity(registry, seed):
    doc = generate_document(seed, registry)
    via_json = must_load(to_json(doc), registry)
    reparsed, diags = parse_text(print_text(doc), registry)
    assert reparsed is not None
    assert via_json == reparsed == doc


def test_convert_dsl_json_fixed_point(registry, rhms_text, rhms_golden_text):
    as_json, _ = convert(rhms_text, "dsl", "json", registry)
    assert as_json == rhms_golden_text
    back, _ = convert(as_json, "json", "dsl", registry)
    assert back == rhms_text
    again, _ = convert(back, "dsl", "json", registry)
    assert again == as_json


def test_convert_generated_both_directions(registry):
    doc = generate_document(42, registry)
    dsl_text = print_text(doc)
    as_json, _ = convert(dsl_text, "dsl", "json", registry)
    assert as_json == to_json(doc)
    back, _ = convert(as_json, "json", "dsl", registry)
    assert back == dsl_text


def test_canonical_emission_is_stable(registry, rhms_text):
    doc1, _ = parse_text(rhms_text, registry)
    doc2, _ = parse_text(rhms_text, registry)
    assert to_json(doc1) == to_json(doc2)
    assert to_json(doc1).encode("utf-8") == to_json(doc2).encode("utf-8")


# --- shipped JSON Schema stays in sync with the codec ------------------------

@pytest.fixture(scope="module")
def schema_validator():
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def test_schema_accepts_corpus_and_generated(registry, corpus_paths,
                                             schema_validator):
    for path in corpus_paths:
        doc, _ = parse_text(path.read_text(encoding="utf-8"), registry)
        schema_validator.validate(json.loads(to_json(doc)))
    for seed in range(200):
        doc = generate_document(seed, registry)
        schema_validator.validate(json.loads(to_json(doc)))


def test_schema_rejects_what_codec_rejects(registry, rhms_golden_text,
                                           schema_validator):
    cases = []
    base = json.loads(rhms_golden_text)

    unknown = json.loads(rhms_golden_text)
    unknown["slaVersion"] = "2.0"
    cases.append(unknown)

    missing_priority = json.loads(rhms_golden_text)
    del missing_priority["sla"]["slos"][0]["priority"]
    cases.append(missing_priority)

    negative = json.loads(rhms_golden_text)
    negative["sla"]["slos"][0]["value"] = -5
    cases.append(negative)

    no_slos = json.loads(rhms_golden_text)
    no_slos["sla"]["slos"] = []
    cases.append(no_slos)

    bad_version = json.loads(rhms_golden_text)
    bad_version["formatVersion"] = "9.9"
    cases.append(bad_version)

    schema_validator.validate(base)  # sanity: the fixture itself passes
    for case in cases:
        assert not schema_validator.is_valid(case)
        doc, diags = from_json(json.dumps(case), registry)
        assert doc is None and errors_of(diags)
