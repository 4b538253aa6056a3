from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from errors import ValidationError


@dataclass
class ValidationReport:
    """Outcome of an input check: ok flag, violations in discovery order, extra metrics"""

    subject: str
    violations: List[str] = field(default_factory=list)
    metrics: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Optional[str]:
        return self.violations[0] if self.violations else None

    def add(self, message: str):
        self.violations.append(message)

    def raise_for_status(self) -> "ValidationReport":
        if self.violations:
            raise ValidationError(self)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {"subject": self.subject, "ok": self.ok,
                "violations": list(self.violations), "metrics": dict(self.metrics)}
