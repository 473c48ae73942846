"""Scenario runner, built-in scenarios, property suites and report export."""

from .export import (
    dump_scenario,
    export_csv,
    load_model_spec,
    load_scenario,
    parse_scenario,
    quantities_frame,
    ratio_table,
    report_records,
    to_jsonl,
    write_jsonl,
)
from .properties import run_property_suites
from .runner import run_scenario, verify_all, violation_ratio, with_overrides
from .scenarios import BUILTIN_SCENARIOS, builtin_names, get_builtin

__all__ = [
    "BUILTIN_SCENARIOS",
    "builtin_names",
    "dump_scenario",
    "export_csv",
    "get_builtin",
    "load_model_spec",
    "load_scenario",
    "parse_scenario",
    "quantities_frame",
    "ratio_table",
    "report_records",
    "run_property_suites",
    "run_scenario",
    "to_jsonl",
    "verify_all",
    "violation_ratio",
    "with_overrides",
    "write_jsonl",
]
