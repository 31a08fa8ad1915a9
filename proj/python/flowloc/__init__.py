"""Counterexample-driven fault localization for small annotated programs."""

import json as _json

from ._flowloc import (
    REPORT_SCHEMA_VERSION,
    UNBOUNDED,
    CounterexampleError,
    FlowlocError,
    NothingToLocalize,
    ParseError,
    TypecheckError,
    check,
    enumerate_mcs,
    interpret,
    to_dot,
    typecheck,
)
from ._flowloc import localize as _localize

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "UNBOUNDED",
    "CounterexampleError",
    "FlowlocError",
    "NothingToLocalize",
    "ParseError",
    "TypecheckError",
    "check",
    "enumerate_mcs",
    "interpret",
    "localize",
    "localize_text",
    "to_dot",
    "typecheck",
]


def localize(source, counterexample, **options):
    """Report as a dict with the layout of docs/report-schema.json."""
    return _json.loads(_localize(source, dict(counterexample), format="json", **options))


def localize_text(source, counterexample, **options):
    """Report in the line-oriented text format of the CLI."""
    return _localize(source, dict(counterexample), format="text", **options)
