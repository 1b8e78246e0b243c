"""Command-line entry point: parse, convert, match, template, serve.

Exit codes: 0 success, 1 validation or match failure, 2 usage error,
3 I/O error.  Diagnostics go to stderr as ``file:line:col: severity:
message``; canonical document output goes to stdout or ``--out``.
"""

from __future__ import annotations

import json
import os
import socket
import sys
from datetime import date

import click

from . import dsl, jsoncodec, matcher
from .diagnostics import format_diagnostic, has_errors
from .model import UsageError, build_document
from .vocabulary import (CANONICAL_UNITS, RESOURCE_KIND_SCOPE,
                         SERVICE_KIND_SCOPE, VocabularyError,
                         VocabularyRegistry, default_registry, load_registry,
                         normalize_name)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_IO = 3

REGISTRY_ENV = "SLA_IOT_REGISTRY"

# Default activity -> (service kind, resource kind) mapping used by
# `slaiot template`, following the RHMS walkthrough; unknown activities
# fall back to ingestion on an edge resource.
TEMPLATE_MAPPING = {
    "capture event of interest(eoi)": ("sensing", "iot_device"),
    "capture eoi": ("sensing", "iot_device"),
    "examine the captured (eoi) on fly": ("ingestion", "edge"),
    "examine the captured eoi": ("ingestion", "edge"),
    "actuate based on the captured event's value": ("sensing", "iot_device"),
    "analyze real-time data": ("stream_processing", "cloud"),
    "analyze historical data": ("batch_processing", "cloud"),
    "store unstructured data": ("database_nosql", "cloud"),
    "store results": ("database_nosql", "cloud"),
}
DEFAULT_MAPPING = ("ingestion", "edge")


def _fail(code: int, message: str) -> None:
    click.echo(f"slaiot: {message}", err=True)
    sys.exit(code)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}")


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}")


def _get_registry(registry_path: str | None) -> VocabularyRegistry:
    path = registry_path or os.environ.get(REGISTRY_ENV)
    if not path:
        return default_registry()
    try:
        return load_registry(_read_file(path))
    except VocabularyError as exc:
        _fail(EXIT_USAGE, f"bad registry {path}: {exc}")


def _format_of(path: str) -> str:
    if path.endswith(".slaiot"):
        return "dsl"
    if path.endswith(".json"):
        return "json"
    _fail(EXIT_USAGE, f"cannot tell the format of {path}: "
                      "expected a .slaiot or .sla.json file")


def _load_doc(path: str, registry: VocabularyRegistry, *, report: bool = True):
    """Parse a document file, printing diagnostics; returns (doc, had_errors)."""
    text = _read_file(path)
    if _format_of(path) == "dsl":
        doc, diags = dsl.parse_text(text, registry)
    else:
        doc, diags = jsoncodec.from_json(text, registry)
    if report:
        for d in diags:
            click.echo(format_diagnostic(path, d), err=True)
    return doc, has_errors(diags)


registry_option = click.option(
    "--registry", "registry_path", type=click.Path(), default=None,
    help=f"Registry JSON file (default: ${REGISTRY_ENV} or the built-in registry).")


@click.group()
@click.version_option(package_name="slaiot", prog_name="slaiot")
def main() -> None:
    """SLA specification toolkit for IoT applications."""


@main.command("parse")
@click.argument("path", type=click.Path())
@registry_option
def cmd_parse(path: str, registry_path: str | None) -> None:
    """Parse and validate a document; exit 0 iff it is valid."""
    registry = _get_registry(registry_path)
    doc, failed = _load_doc(path, registry)
    sys.exit(EXIT_INVALID if failed or doc is None else EXIT_OK)


@main.command("convert")
@click.argument("path", type=click.Path())
@click.option("--to", "target", type=click.Choice(["dsl", "json"]), required=True,
              help="Target format.")
@click.option("--out", type=click.Path(), default=None,
              help="Output file ('-' or omitted: stdout).")
@registry_option
def cmd_convert(path: str, target: str, out: str | None,
                registry_path: str | None) -> None:
    """Convert between the DSL and JSON formats (canonicalizes either way)."""
    registry = _get_registry(registry_path)
    text = _read_file(path)
    converted, diags = jsoncodec.convert(text, _format_of(path), target, registry)
    for d in diags:
        click.echo(format_diagnostic(path, d), err=True)
    if converted is None:
        sys.exit(EXIT_INVALID)
    _write_output(converted, out)
    sys.exit(EXIT_OK)


def _parse_weights(raw: str | None) -> dict[str, int] | None:
    if raw is None:
        return None
    try:
        high, medium, low = (int(p) for p in raw.split(","))
    except ValueError:
        raise click.UsageError("--weights must be three integers: high,medium,low")
    if min(high, medium, low) < 0:
        raise click.UsageError("--weights must be non-negative")
    return {"high": high, "medium": medium, "low": low}


@main.command("match")
@click.argument("request_path", type=click.Path())
@click.argument("offer_paths", type=click.Path(), nargs=-1, required=True)
@click.option("--min-score", type=float, default=0.0, show_default=True,
              help="Exit 0 only if the best offer scores at least this.")
@click.option("--weights", default=None,
              help="Priority weights as high,medium,low (default 3,2,1).")
@registry_option
def cmd_match(request_path: str, offer_paths: tuple[str, ...], min_score: float,
              weights: str | None, registry_path: str | None) -> None:
    """Rank offers against a request; print the match reports as JSON."""
    registry = _get_registry(registry_path)
    weight_map = _parse_weights(weights)
    request_doc, failed = _load_doc(request_path, registry)
    if request_doc is None:
        sys.exit(EXIT_INVALID)
    offers = []
    for p in offer_paths:
        doc, offer_failed = _load_doc(p, registry)
        if doc is None:
            sys.exit(EXIT_INVALID)
        offers.append(doc)
    try:
        reports = matcher.rank_offers(offers, request_doc, registry, weight_map)
    except UsageError as exc:
        _fail(EXIT_USAGE, str(exc))
    sys.stdout.write(json.dumps([r.to_dict() for r in reports],
                                indent=2, ensure_ascii=False) + "\n")
    best = reports[0]
    ok = best.hard_pass and float(best.score) >= min_score
    sys.exit(EXIT_OK if ok else EXIT_INVALID)


def _placeholder_slos(registry: VocabularyRegistry, scope: str) -> list[dict]:
    for m in registry.metrics:
        if m.kind == "performance" and scope in m.applicability:
            part = {"metric": m.name, "priority": "medium",
                    "comparator": "lte", "value": 0}
            unit = CANONICAL_UNITS.get(m.dimension)
            if unit is not None:
                part["unit"] = unit
            return [part]
    return []


@main.command("template")
@click.option("--application", default="my application", show_default=True,
              help="Application type for the skeleton.")
@click.option("--activities", "activity_names", multiple=True,
              help="Activity names to include (repeatable).")
@registry_option
def cmd_template(application: str, activity_names: tuple[str, ...],
                 registry_path: str | None) -> None:
    """Print a parseable DSL skeleton with placeholder SLOs to fill in."""
    registry = _get_registry(registry_path)
    activities = []
    previous: str | None = None
    for name in activity_names:
        key = normalize_name(name)
        if key not in TEMPLATE_MAPPING and not registry.has_activity(name):
            click.echo(f"slaiot: warning: unknown activity {name!r}; "
                       f"using {'/'.join(DEFAULT_MAPPING)} defaults", err=True)
        service_kind, resource_kind = TEMPLATE_MAPPING.get(key, DEFAULT_MAPPING)
        activities.append({
            "id": name,
            "name": name,
            "depends_on": [previous] if previous else [],
            "service": {"kind": service_kind,
                        "slos": _placeholder_slos(
                            registry, SERVICE_KIND_SCOPE[service_kind]),
                        "configuration": []},
            "resource": {"kind": resource_kind,
                         "slos": _placeholder_slos(
                             registry, RESOURCE_KIND_SCOPE[resource_kind]),
                         "configuration": []},
        })
        previous = name
    parts = {
        "id": "sla-template",
        "description": "Describe the agreement here",
        "sla_type": "request",
        "application_type": application,
        "start_date": date(2026, 1, 1),
        "end_date": date(2027, 1, 1),
        "parties": [],
        "slos": _placeholder_slos(registry, "application"),
        "activities": activities,
    }
    doc, diags = build_document(parts, registry)
    if doc is None:  # pragma: no cover - placeholder construction is total
        for d in diags:
            click.echo(format_diagnostic("<template>", d), err=True)
        sys.exit(EXIT_INVALID)
    sys.stdout.write(dsl.print_text(doc))
    sys.exit(EXIT_OK)


@main.command("serve")
@click.option("--port", type=int, default=8099, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@registry_option
def cmd_serve(port: int, host: str, registry_path: str | None) -> None:
    """Run the wizard backend (API plus static UI when built)."""
    import uvicorn

    from .service.app import create_app

    registry = _get_registry(registry_path)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        _fail(EXIT_IO, f"cannot bind {host}:{port}: {exc.strerror or exc}")
    finally:
        probe.close()
    uvicorn.run(create_app(registry), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
