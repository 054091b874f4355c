"""
Exception hierarchy for grandpolar.

Abandoned decodings are outcomes, not errors; nothing in the decoders raises
for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass
class ConfigIssue:
    code: str
    severity: Severity
    message: str
    path: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "message": self.message,
            "path": self.path,
        }

    def __str__(self) -> str:
        where = f" ({self.path})" if self.path else ""
        return f"{self.code}: {self.message}{where}"


class GrandError(Exception):
    """Base class of all grandpolar errors."""


class DimensionError(GrandError, ValueError):
    """Operand lengths or shapes do not agree."""


class ConstructionError(GrandError):
    """A code, generator or parity-check matrix cannot be built."""


class ChannelDomainError(GrandError, ValueError):
    """Channel parameters outside the range where the formulas hold."""


class StrataError(GrandError):
    """Conditional strata missing or inconsistent for a combiner."""


class CodeConfigError(GrandError):
    """A code config file failed validation."""

    def __init__(self, source: str, issues: Optional[List[ConfigIssue]] = None) -> None:
        self.source = source
        self.issues = list(issues or [])
        errors = [i for i in self.issues if i.severity == Severity.ERROR]
        lines = "\n".join(f"  {e}" for e in errors)
        super().__init__(f"{source} failed validation:\n{lines}" if lines else source)
