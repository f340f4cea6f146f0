from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, ConfigDict
from rich.console import Console
from rich.table import Table

from depthkit.utils.hash import compute_payload_hash


class CaseResult(BaseModel):
    """One verified property: what was expected, what was measured"""
    model_config = ConfigDict(frozen=True)

    case: str
    expected: str
    measured: str
    passed: bool

    def to_json_dict(self) -> Dict[str, Any]:
        return {"case": self.case, "expected": self.expected, "measured": self.measured, "pass": self.passed}


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    seed: int
    cases: List[CaseResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> List[CaseResult]:
        return [c for c in self.cases if not c.passed]

    @property
    def digest(self) -> str:
        """Independent of run time, so equal seeds give equal digests"""
        return compute_payload_hash([c.to_json_dict() for c in self.cases])

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "cases": [c.to_json_dict() for c in self.cases],
            "passed": self.passed,
            "digest": self.digest,
        }


def merge_reports(suite: str, seed: int, reports: List[VerificationReport]) -> VerificationReport:
    cases = [c.model_copy(update={"case": f"{r.suite}: {c.case}"}) for r in reports for c in r.cases]
    return VerificationReport(suite=suite, seed=seed, cases=cases)


def render_report(console: Console, report: VerificationReport, failures_only: bool = False) -> None:
    table = Table(title=f"Verification: {report.suite} (seed {report.seed})")
    table.add_column("Case", style="cyan")
    table.add_column("Expected")
    table.add_column("Measured")
    table.add_column("Status", justify="center")

    rows = report.failures if failures_only else report.cases
    for c in rows:
        table.add_row(c.case, c.expected, c.measured, "[green]✓[/green]" if c.passed else "[red]✗[/red]")
    console.print(table)

    n_failed = len(report.failures)
    summary = f"{len(report.cases) - n_failed}/{len(report.cases)} passed"
    console.print(f"[green]{summary}[/green]" if n_failed == 0 else f"[red]{summary}[/red]")


class ReportWriter:
    """Writes verification reports as YAML files"""

    def __init__(self, path: Path):
        self.path = path

    def save(self, report: VerificationReport, config: Optional[Dict[str, Any]] = None) -> Path:
        data = {
            "timestamp": datetime.now().isoformat(),
            "suite": report.suite,
            "seed": report.seed,
            "config": config or {},
            "passed": report.passed,
            "digest_sha256": report.digest,
            "cases": [c.to_json_dict() for c in report.cases],
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w") as f:
            yaml.safe_dump(data, f, sort_keys=False, allow_unicode=True)
        return self.path

    def load(self) -> Dict[str, Any]:
        with open(self.path) as f:
            return yaml.safe_load(f)
