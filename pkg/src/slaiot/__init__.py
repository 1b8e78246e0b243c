"""End-to-end SLA specification toolkit for IoT applications.

Parse and print the `.slaiot` DSL, validate documents against the
conceptual model, emit/load the canonical `.sla.json` format, and check or
rank provider offers against consumer requests.
"""

__version__ = "0.1.0"

from .diagnostics import Diagnostic, SourceSpan
from .dsl import parse_text, print_text
from .generator import generate_document
from .jsoncodec import convert, from_json, to_json
from .matcher import MatchReport, constraint_satisfies, match, rank_offers
from .model import (Constraint, Party, SlaDocument, WorkflowActivity,
                    build_document, collect_constraints, topological_order)
from .vocabulary import (VocabularyRegistry, default_registry, dump_registry,
                         load_registry, normalize, resolve_metric)

__all__ = [
    "Constraint", "Diagnostic", "MatchReport", "Party", "SlaDocument",
    "SourceSpan", "VocabularyRegistry", "WorkflowActivity", "build_document",
    "collect_constraints", "constraint_satisfies", "convert",
    "default_registry", "dump_registry", "from_json", "generate_document",
    "load_registry", "match", "normalize", "parse_text", "print_text",
    "rank_offers", "resolve_metric", "to_json", "topological_order",
]
