"""Machine-checkable verification records.

A Certificate collects named checks, each with a status, a short detail and
an optional witness (pairs, atom indices, relations as pair lists). It is
rendered either as text or as canonical JSON (sorted keys, fixed
separators), so identical runs produce identical bytes when elapsed time is
zeroed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List

from eqra import __version__
from eqra.exceptions import ConfigurationException
from eqra.settings import config


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    INFO = "info"


@dataclass(frozen=True)
class Check:
    """One named check.

    Args:
        name: Stable identifier, e.g. ``lemma.p5.eta0.alpha1``.
        status: Outcome.
        detail: Human readable explanation.
        witness: JSON-compatible evidence for the outcome.
    """

    name: str
    status: CheckStatus
    detail: str = ""
    witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        entry: Dict[str, Any] = {"name": self.name, "status": self.status.value, "detail": self.detail}
        if self.witness is not None:
            entry["witness"] = self.witness
        return entry


def check(name: str, ok: bool, detail: str = "", witness: Any = None, informational: bool = False) -> Check:
    """PASS when ok; otherwise FAIL, or INFO for checks outside their hypothesis."""
    if ok:
        return Check(name, CheckStatus.PASS, detail, witness)
    return Check(name, CheckStatus.INFO if informational else CheckStatus.FAIL, detail, witness)


@dataclass
class Certificate:
    """Aggregate record of a verification command."""

    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    elapsed_ms: int = 0

    def add(self, item: Check) -> Check:
        self.checks.append(item)
        return item

    def extend(self, items) -> None:
        self.checks.extend(items)

    @property
    def passed(self) -> bool:
        return all(c.status is not CheckStatus.FAIL for c in self.checks)

    @property
    def overall(self) -> str:
        return CheckStatus.PASS.value if self.passed else CheckStatus.FAIL.value

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status is CheckStatus.FAIL]

    def counts(self) -> Dict[str, int]:
        tally = {status.value: 0 for status in CheckStatus}
        for c in self.checks:
            tally[c.status.value] += 1
        return tally

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": config.CERTIFICATE_SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
            "tool_version": __version__,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, separators=(",", ": "))

    def format_text(self, verbose: bool = False) -> str:
        """Summary line plus one line per check (passing checks only when verbose)."""
        counts = self.counts()
        lines = [
            f"{self.command}: {self.overall.upper()} "
            f"({counts['pass']} pass, {counts['fail']} fail, {counts['info']} info, {counts['skipped']} skipped)"
        ]
        for c in self.checks:
            if c.status is CheckStatus.PASS and not verbose:
                continue
            lines.append(f"  [{c.status.value}] {c.name}: {c.detail}")
            if c.witness is not None and c.status is CheckStatus.FAIL:
                lines.append(f"      witness: {json.dumps(c.witness, sort_keys=True)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class RunConfig:
    """Budgets and switches shared by the verification suites.

    Args:
        atom_budget: Closure atom budget.
        pp_max_vars: pp search variable budget.
        pp_max_constraints: pp search constraint budget.
        json_output: Emit JSON instead of text.
        unsafe: Allow parameters outside the lemma hypotheses (reported as info).
        parallelism: Worker threads for independent sections.
        seed: Seed for the sampled property sections.
    """

    atom_budget: int = config.ATOM_BUDGET
    pp_max_vars: int = config.PP_MAX_VARS
    pp_max_constraints: int = config.PP_MAX_CONSTRAINTS
    json_output: bool = False
    unsafe: bool = False
    parallelism: int = config.PARALLELISM
    seed: int = config.RANDOM_SEED

    def __post_init__(self) -> None:
        if self.atom_budget < 1 or self.pp_max_vars < 2 or self.pp_max_constraints < 1:
            raise ConfigurationException("Budgets must be positive (pp search needs at least 2 variables)")
        if self.parallelism < 1:
            raise ConfigurationException("Parallelism must be at least 1")
