"""Verification report records shared by the check harness."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict


class PreconditionError(ValueError):
    """A stated hypothesis of a check or metric does not hold."""


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one numerical check.

    ``status`` is recomputable: pass iff max_violation <= tolerance, except
    for skipped checks, which carry the reason the hypotheses were unmet.
    """

    check: str
    status: str
    max_violation: float
    tolerance: float
    instance_digest: str
    grid_provenance: str
    skip_reason: str | None = None

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"invalid status {self.status!r}")
        if self.status == "skipped" and not self.skip_reason:
            raise ValueError("skipped reports need a skip_reason")
        if self.status != "skipped":
            expected = "pass" if self.max_violation <= self.tolerance else "fail"
            if self.status != expected:
                raise ValueError(
                    f"status {self.status} inconsistent with violation "
                    f"{self.max_violation} vs tolerance {self.tolerance}")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json_dict(self):
        return asdict(self)

    def dumps(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)


def make_report(check, max_violation, tolerance, instance_digest,
                grid_provenance) -> VerificationReport:
    """Report with status derived from the violation/tolerance comparison."""
    max_violation = float(max_violation)
    tolerance = float(tolerance)
    return VerificationReport(
        check=check,
        status="pass" if max_violation <= tolerance else "fail",
        max_violation=max_violation,
        tolerance=tolerance,
        instance_digest=instance_digest,
        grid_provenance=grid_provenance,
    )


def make_skipped(check, reason, instance_digest, grid_provenance="") -> VerificationReport:
    return VerificationReport(
        check=check,
        status="skipped",
        max_violation=float("nan"),
        tolerance=float("nan"),
        instance_digest=instance_digest,
        grid_provenance=grid_provenance,
        skip_reason=reason,
    )
