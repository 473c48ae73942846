#!/usr/bin/env python3
"""
Test runner for Bloch Verifier.

Runs the unit tests, the CLI system tests and the full verification suite,
then prints a short summary. Exits non-zero if anything failed.
"""

import subprocess
import sys
import time
from typing import List, Tuple

from rich.console import Console
from rich.rule import Rule
from rich.table import Table

console = Console()

STEPS = [
    ("Unit tests", ["pytest", "src/bloch_verifier/tests/", "-q", "--tb=short"], 600),
    ("CLI system tests", ["pytest", "tests/", "-q", "--tb=short"], 600),
    ("Full verification", ["bloch-verifier", "--log-level", "WARNING", "verify", "--no-save"], 1200),
]


def run_step(command: List[str], timeout: int) -> Tuple[bool, str]:
    """Run one command; return (passed, short detail)."""
    start = time.perf_counter()
    try:
        result = subprocess.run(command, capture_output=True, timeout=timeout)
    except FileNotFoundError:
        return False, f"{command[0]} not found - run: pip install -e ."
    except subprocess.TimeoutExpired:
        return False, f"timed out after {timeout}s"
    if result.returncode == 0:
        return True, f"{time.perf_counter() - start:.1f}s"
    lines = result.stdout.decode().strip().splitlines() or result.stderr.decode().strip().splitlines()
    return False, f"exit {result.returncode}: {lines[-1] if lines else 'no output'}"


def main() -> int:
    console.print(Rule("[bold blue]BLOCH VERIFIER - TEST SUITE"))

    table = Table(show_header=True, header_style="bold")
    table.add_column("Step")
    table.add_column("Result")
    table.add_column("Detail")

    failed = []
    for label, command, timeout in STEPS:
        with console.status(f"{label}..."):
            passed, detail = run_step(command, timeout)
        table.add_row(label, "[green]PASS" if passed else "[red]FAIL", detail)
        if not passed:
            failed.append(label)

    console.print(table)
    if not failed:
        console.print("[bold green]ALL TESTS PASSED")
        return 0

    console.print(f"[bold red]{len(failed)} of {len(STEPS)} steps failed: {', '.join(failed)}")
    if "Full verification" in failed:
        console.print("[yellow]Re-run with a table of the failed checks:[/yellow] bloch-verifier verify --no-save")
    return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        console.print("\n[yellow]Tests interrupted by user.")
        sys.exit(130)
