"""Pass/fail records shared by the axiom and certificate checks."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from .config import SCHEMA_VERSION

logger = logging.getLogger(__name__)


@dataclass
class AxiomReport:
    """
    Outcome of one sampled or exhaustive property check. Only the first
    counterexample is kept.
    """

    axiom: str
    seed: Optional[int] = None
    samples: int = 0
    passed: bool = True
    counterexample: Optional[Dict[str, str]] = None

    def record(self, ok: bool, **witness: Any) -> bool:
        self.samples += 1
        if not ok and self.passed:
            self.passed = False
            self.counterexample = {key: str(value) for key, value in witness.items()}
            logger.warning("%s failed: %s", self.axiom, self.counterexample)
        return ok

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "axiom": self.axiom,
            "samples": self.samples,
            "pass": self.passed,
            "seed": self.seed,
        }
        if self.counterexample is not None:
            data["counterexample"] = self.counterexample
        return data


@dataclass
class ReportSuite:
    """An ordered collection of axiom reports."""

    name: str
    reports: List[AxiomReport] = field(default_factory=list)

    def add(self, report: AxiomReport) -> AxiomReport:
        self.reports.append(report)
        return report

    def __getitem__(self, axiom: str) -> AxiomReport:
        for report in self.reports:
            if report.axiom == axiom:
                return report
        raise KeyError(axiom)

    def __iter__(self):
        return iter(self.reports)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def failures(self) -> List[AxiomReport]:
        return [r for r in self.reports if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "pass": self.passed,
            "reports": [r.to_dict() for r in self.reports],
        }


def with_schema(payload: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema": SCHEMA_VERSION, **payload}


def all_passed(suites: Iterable[ReportSuite]) -> bool:
    return all(s.passed for s in suites)
