import dataclasses
import json

import pytest

from slaiot.dsl import parse_text, print_text
from slaiot.jsoncodec import to_json

from conftest import CORPUS_DIR, INVALID_DIR, RHMS_DSL, RHMS_GOLDEN, run_cli


def test_parse_valid_fixture_silent_success():
    code, out, err = run_cli("parse", str(RHMS_DSL))
    assert (code, out, err) == (0, "", "")


def test_parse_json_document():
    code, out, err = run_cli("parse", str(RHMS_GOLDEN))
    assert (code, out, err) == (0, "", "")


def test_parse_cycle_names_both_activities():
    code, out, err = run_cli("parse", str(INVALID_DIR / "cycle.slaiot"))
    assert code == 1
    error_lines = [l for l in err.splitlines() if ": error:" in l]
    assert len(error_lines) == 1
    assert '"a"' in error_lines[0] or "a ->" in error_lines[0]
    assert "b" in error_lines[0]


def test_parse_missing_file_is_io_error(tmp_path):
    code, _out, err = run_cli("parse", str(tmp_path / "nope.slaiot"))
    assert code == 3
    assert "nope.slaiot" in err


def test_parse_unknown_extension_is_usage_error(tmp_path):
    target = tmp_path / "doc.yaml"
    target.write_text("hi", encoding="utf-8")
    code, _out, _err = run_cli("parse", str(target))
    assert code == 2


def test_parse_diagnostics_format():
    code, _out, err = run_cli("parse", str(INVALID_DIR / "unknown-metric.slaiot"))
    assert code == 1
    line = next(l for l in err.splitlines() if ": error: " in l)
    # file:line:col: severity: message
    head = line.split(": ", 1)[0]
    parts = head.rsplit(":", 2)
    assert parts[0].endswith("unknown-metric.slaiot")
    assert parts[1].isdigit() and parts[2].isdigit()


def test_convert_matches_golden_file(tmp_path):
    out_path = tmp_path / "rhms.sla.json"
    code, out, err = run_cli("convert", str(RHMS_DSL), "--to", "json",
                             "--out", str(out_path))
    assert code == 0, err
    assert out_path.read_bytes() == RHMS_GOLDEN.read_bytes()


def test_convert_stdout_round_trip(tmp_path):
    code, as_json, _ = run_cli("convert", str(RHMS_DSL), "--to", "json")
    assert code == 0
    json_path = tmp_path / "doc.sla.json"
    json_path.write_text(as_json, encoding="utf-8")
    code, as_dsl, _ = run_cli("convert", str(json_path), "--to", "dsl")
    assert code == 0
    assert as_dsl == RHMS_DSL.read_text(encoding="utf-8")
    dsl_path = tmp_path / "doc.slaiot"
    dsl_path.write_text(as_dsl, encoding="utf-8")
    code, again, _ = run_cli("convert", str(dsl_path), "--to", "json")
    assert again == as_json


def test_convert_to_same_format_acts_as_formatter(tmp_path, registry):
    messy = CORPUS_DIR / "messy-comments.slaiot"
    code, out, _ = run_cli("convert", str(messy), "--to", "dsl")
    assert code == 0
    doc, _ = parse_text(messy.read_text(encoding="utf-8"), registry)
    assert out == print_text(doc)


def test_convert_invalid_document_exits_one():
    code, _out, err = run_cli("convert", str(INVALID_DIR / "cycle.slaiot"),
                              "--to", "json")
    assert code == 1
    assert "cycle" in err


def test_convert_bad_target_is_usage_error():
    code, _out, _err = run_cli("convert", str(RHMS_DSL), "--to", "yaml")
    assert code == 2


def test_match_identical_offer_scores_one(tmp_path, registry):
    doc, _ = parse_text(RHMS_DSL.read_text(encoding="utf-8"), registry)
    offer = dataclasses.replace(doc, sla_type="offer", id="rhms-copy")
    offer_path = tmp_path / "offer.slaiot"
    offer_path.write_text(print_text(offer), encoding="utf-8")
    code, out, err = run_cli("match", str(RHMS_DSL), str(offer_path))
    assert code == 0, err
    reports = json.loads(out)
    assert reports[0]["score"] == 1.0
    assert reports[0]["hardPass"] is True


def test_match_unhelpful_offer_exits_one(tmp_path):
    code, out, _ = run_cli("match", str(RHMS_DSL),
                           str(CORPUS_DIR / "minimal-offer.slaiot"))
    assert code == 1
    reports = json.loads(out)
    assert reports[0]["hardPass"] is False


def test_match_ranked_order_and_min_score(tmp_path, registry):
    from slaiot.matcher import rank_offers

    doc, _ = parse_text(RHMS_DSL.read_text(encoding="utf-8"), registry)
    exact = dataclasses.replace(doc, sla_type="offer", id="exact")
    exact_path = tmp_path / "exact.slaiot"
    exact_path.write_text(print_text(exact), encoding="utf-8")
    offers = [parse_text((CORPUS_DIR / "minimal-offer.slaiot").read_text(
                  encoding="utf-8"), registry)[0],
              exact,
              parse_text((CORPUS_DIR / "rhms-offer.slaiot").read_text(
                  encoding="utf-8"), registry)[0]]
    code, out, _ = run_cli(
        "match", str(RHMS_DSL), str(CORPUS_DIR / "minimal-offer.slaiot"),
        str(exact_path), str(CORPUS_DIR / "rhms-offer.slaiot"))
    assert code == 0
    ids = [r["offerId"] for r in json.loads(out)]
    engine_order = [r.offer_id for r in rank_offers(offers, doc, registry)]
    assert ids == engine_order
    assert ids[-1] == "minimal-offer"
    code, _, _ = run_cli("match", str(RHMS_DSL), str(exact_path),
                         "--min-score", "1.0")
    assert code == 0
    code, _, _ = run_cli("match", str(RHMS_DSL),
                         str(CORPUS_DIR / "minimal-offer.slaiot"),
                         "--min-score", "0.99")
    assert code == 1


def test_match_type_mismatch_is_usage_error():
    code, _out, err = run_cli("match", str(RHMS_DSL), str(RHMS_DSL))
    assert code == 2
    assert "not an offer" in err


def test_match_weights_flag(tmp_path, registry):
    code, _, err = run_cli("match", str(RHMS_DSL),
                           str(CORPUS_DIR / "rhms-offer.slaiot"),
                           "--weights", "1,1,1")
    assert code == 0, err
    code, _, err = run_cli("match", str(RHMS_DSL),
                           str(CORPUS_DIR / "rhms-offer.slaiot"),
                           "--weights", "a,b,c")
    assert code == 2


def test_template_capture_eoi_maps_to_sensing_iot_device():
    code, out, err = run_cli("template", "--activities", "Capture EoI")
    assert code == 0, err
    assert 'activity "Capture EoI"' in out
    assert "service sensing {" in out
    assert "resource iot_device {" in out


def test_template_minimal_without_flags(tmp_path, registry):
    code, out, _ = run_cli("template")
    assert code == 0
    doc, diags = parse_text(out, registry)
    assert doc is not None
    assert doc.activities == ()
    c = doc.application_slos[0]
    assert (c.comparator, c.value) == ("lte", 0)


def test_template_all_catalog_activities_parses(tmp_path, registry):
    catalog = list(registry.activities)
    args = ["template", "--application", "smart health"]
    for name in catalog:
        args += ["--activities", name]
    code, out, err = run_cli(*args)
    assert code == 0, err
    assert err == ""  # catalog names produce no warnings
    skeleton = tmp_path / "skeleton.slaiot"
    skeleton.write_text(out, encoding="utf-8")
    code, _, err = run_cli("parse", str(skeleton))
    assert code == 0, err


def test_template_unknown_activity_warns_but_emits(tmp_path, registry):
    code, out, err = run_cli("template", "--activities", "Juggle data")
    assert code == 0
    assert "warning" in err and "Juggle data" in err
    doc, diags = parse_text(out, registry)
    assert doc is not None
    assert doc.activities[0].service.kind == "ingestion"
    assert doc.activities[0].resource.kind == "edge"


def test_registry_env_var_is_honored(tmp_path, monkeypatch):
    import subprocess
    import sys

    tiny = {
        "metrics": [{"name": "Response Time", "kind": "performance",
                     "dimension": "time", "tendency": "lower_is_better",
                     "applicability": ["application"]}],
        "units": [{"symbol": "millisecond", "dimension": "time", "factor": 1},
                  {"symbol": "minutes", "dimension": "time", "factor": 60000}],
        "roles": [], "activities": [],
    }
    registry_path = tmp_path / "tiny.json"
    registry_path.write_text(json.dumps(tiny), encoding="utf-8")
    env = dict(**__import__("os").environ, SLA_IOT_REGISTRY=str(registry_path))
    proc = subprocess.run(
        [sys.executable, "-m", "slaiot.cli", "parse", str(RHMS_DSL)],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 1
    assert "unknown" in proc.stderr or "not in the registry" in proc.stderr


def test_bad_registry_file_is_usage_error(tmp_path):
    registry_path = tmp_path / "broken.json"
    registry_path.write_text("{zzz}", encoding="utf-8")
    code, _out, err = run_cli("parse", str(RHMS_DSL),
                              "--registry", str(registry_path))
    assert code == 2
    assert "registry" in err
