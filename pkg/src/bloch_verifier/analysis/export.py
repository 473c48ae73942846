"""
Report and Scenario Export.

Scenario files round-trip through YAML with every real number written as a
17-significant-digit decimal. Reports are written as line-delimited JSON
records, rendered as rich tables, and tabulated with pandas for CSV export.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import pandas as pd
import yaml
from loguru import logger
from pydantic import TypeAdapter, ValidationError
from rich.console import Console
from rich.table import Table

from ..errors import ConfigError
from ..lhv.models import lhv_upper_bound
from ..lhv.spec import ModelSpec
from ..models.scenario import AggregateReport, Report, ScenarioConfig
from ..quantum.correlations import separable_maximum
from .runner import violation_ratio

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """Decimal string with 17 significant digits; round-trips every double."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = format(value, ".17g")
    if "." not in text:
        mantissa, _, exponent = text.partition("e")
        text = f"{mantissa}.0e{exponent}" if exponent else f"{mantissa}.0"
    return text


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------


class _ScenarioDumper(yaml.SafeDumper):
    pass


def _represent_float(dumper: yaml.SafeDumper, value: float):
    if math.isnan(value):
        text = ".nan"
    elif math.isinf(value):
        text = ".inf" if value > 0 else "-.inf"
    else:
        text = format_float(value)
    return dumper.represent_scalar("tag:yaml.org,2002:float", text)


_ScenarioDumper.add_representer(float, _represent_float)
_ScenarioDumper.add_representer(tuple, lambda d, v: d.represent_list(list(v)))


_MODEL_SPEC = TypeAdapter(ModelSpec)


def _load_mapping(text: str, source: str) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark is not None else None
        raise ConfigError(f"{source}:{line}: {e.problem}", line=line) from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{source}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: expected a mapping, got {type(data).__name__}")
    return data


def _field_error(e: ValidationError, source: str) -> ConfigError:
    error = e.errors()[0]
    field = ".".join(str(part) for part in error["loc"]) or "<root>"
    return ConfigError(f"{source}: {field}: {error['msg']}", field=field)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e}") from e


def parse_scenario(text: str, source: str = "<string>") -> ScenarioConfig:
    """
    Parse and validate a YAML scenario document.

    Raises:
        ConfigError: With the offending line for syntax errors, or the field
            path for validation errors
    """
    data = _load_mapping(text, source)
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise _field_error(e, source) from e


def load_scenario(path: PathLike) -> ScenarioConfig:
    """Read a scenario file; see parse_scenario."""
    path = Path(path)
    config = parse_scenario(_read(path), source=str(path))
    logger.info(f"Loaded scenario '{config.name}' from {path}")
    return config


def dump_scenario(config: ScenarioConfig, path: Optional[PathLike] = None) -> str:
    """Serialize a scenario to YAML, optionally writing it to ``path``."""
    data = config.model_dump(mode="python", exclude_none=True)
    text = yaml.dump(data, Dumper=_ScenarioDumper, sort_keys=False, default_flow_style=None)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Wrote scenario '{config.name}' to {path}")
    return text


def load_model_spec(path: PathLike) -> ModelSpec:
    """
    Read a YAML hidden-variable model spec (a mapping with a ``type`` key).

    Raises:
        ConfigError: On syntax or validation errors
    """
    path = Path(path)
    try:
        return _MODEL_SPEC.validate_python(_load_mapping(_read(path), str(path)))
    except ValidationError as e:
        raise _field_error(e, str(path)) from e


# ---------------------------------------------------------------------------
# Report records
# ---------------------------------------------------------------------------


def _json_value(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value) if math.isfinite(value) else "null"
    return json.dumps(value)


def _record_line(record: Dict[str, Any]) -> str:
    return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in record.items()) + "}"


def report_records(report: Report) -> List[Dict[str, Any]]:
    """Flat records: one per quantity, one per check, then a summary."""
    records: List[Dict[str, Any]] = []
    for q in report.quantities:
        records.append(
            {
                "record": "quantity",
                "scenario": report.scenario,
                "name": q.name,
                "n_parties": q.n_parties,
                "value": q.value,
                "reference": q.reference,
                "reference_formula": q.reference_formula,
                "abs_error": q.abs_error,
                "rel_error": q.rel_error,
            }
        )
    for c in report.checks:
        records.append(
            {
                "record": "check",
                "scenario": report.scenario,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            }
        )
    records.append(
        {
            "record": "summary",
            "scenario": report.scenario,
            "passed": report.passed,
            "n_checks": len(report.checks),
            "n_failed": len(report.failures),
            "duration_s": report.duration_s,
            "n_theta": report.provenance.grid["n_theta"],
            "n_phi": report.provenance.grid["n_phi"],
            "seed": report.provenance.seed,
            "versions": json.dumps(report.provenance.versions, sort_keys=True),
            "tolerances": json.dumps(
                {k: format_float(v) for k, v in report.provenance.tolerances.items()}, sort_keys=True
            ),
        }
    )
    return records


def to_jsonl(reports: Iterable[Report]) -> str:
    return "".join(_record_line(r) + "\n" for report in reports for r in report_records(report))


def write_jsonl(reports: Iterable[Report], path: PathLike) -> Path:
    """Write line-delimited report records; returns the absolute path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_jsonl(reports), encoding="utf-8")
    logger.info(f"Exported report records to {path.resolve()}")
    return path.resolve()


# ---------------------------------------------------------------------------
# Human-readable output
# ---------------------------------------------------------------------------


def _cell(value: Optional[float], digits: int = 12) -> str:
    return "-" if value is None else f"{value:.{digits}g}"


def render_report(report: Report, console: Optional[Console] = None, verbose: bool = False) -> None:
    """Print one report as a rich table of quantities followed by any failed checks."""
    console = console or Console()
    status = "[bold green]PASS[/bold green]" if report.passed else "[bold red]FAIL[/bold red]"
    table = Table(title=f"{report.scenario} {status} ({report.duration_s:.2f}s)", show_lines=False)
    table.add_column("quantity")
    table.add_column("N", justify="right")
    table.add_column("value", justify="right")
    table.add_column("reference", justify="right")
    table.add_column("rel error", justify="right")
    table.add_column("formula")
    for q in report.quantities:
        table.add_row(
            q.name, _cell(q.n_parties), _cell(q.value), _cell(q.reference), _cell(q.rel_error, 3),
            q.reference_formula or "",
        )
    console.print(table)

    shown = report.checks if verbose else report.failures
    for c in shown:
        mark = "[green]✓[/green]" if c.passed else "[red]✗[/red]"
        console.print(f"  {mark} {c.name}: {c.detail}")


def render_summary(aggregate: AggregateReport, console: Optional[Console] = None) -> None:
    """One row per report with its check counts."""
    console = console or Console()
    table = Table(title="Verification summary")
    table.add_column("report")
    table.add_column("checks", justify="right")
    table.add_column("failed", justify="right")
    table.add_column("seconds", justify="right")
    table.add_column("status")
    for report in aggregate.reports:
        table.add_row(
            report.scenario,
            str(len(report.checks)),
            str(len(report.failures)),
            f"{report.duration_s:.2f}",
            "[green]PASS[/green]" if report.passed else "[red]FAIL[/red]",
        )
    console.print(table)
    verdict = "[bold green]ALL CHECKS PASSED[/bold green]" if aggregate.passed else (
        f"[bold red]{aggregate.n_failed} OF {aggregate.n_checks} CHECKS FAILED[/bold red]"
    )
    console.print(f"{verdict} in {aggregate.duration_s:.2f}s")


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def ratio_table(max_parties: int) -> pd.DataFrame:
    """N, (4pi/3)^N, (4pi)^N and their ratio for N = 1..max_parties."""
    rows = [
        {
            "N": n,
            "separable_max": separable_maximum(n),
            "lhv_max": lhv_upper_bound(n),
            "ratio": violation_ratio(n),
            "three_to_N": 3 ** n,
        }
        for n in range(1, max_parties + 1)
    ]
    return pd.DataFrame(rows)


def quantities_frame(reports: Iterable[Report]) -> pd.DataFrame:
    """All quantities of the given reports as one table."""
    rows = [
        {"scenario": report.scenario, **q.model_dump()} for report in reports for q in report.quantities
    ]
    columns = ["scenario", "name", "n_parties", "value", "reference", "reference_formula", "abs_error", "rel_error"]
    return pd.DataFrame(rows, columns=columns)


def export_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write a table as CSV with 17-significant-digit floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Exported {len(frame)} rows to {path.resolve()}")
    return path.resolve()


def render_frame(frame: pd.DataFrame, title: str, console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*(_cell(v, 17) if isinstance(v, float) else str(v) for v in row))
    console.print(table)
