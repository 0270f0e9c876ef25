"""Machine-checkable verdicts.

A certificate carries a claim id, a three-valued status, a witness for
refutations (always independently re-checkable), the search effort
spent, and an echo of the thresholds/budgets it was produced under.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

VERIFIED = "verified"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    claim: str
    status: str
    witness: object = None
    budget_spent: int = 0
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (VERIFIED, REFUTED, UNKNOWN):
            raise ValueError(f"bad certificate status {self.status!r}")
        if self.status == REFUTED and self.witness is None:
            raise ValueError(f"refuted certificate for {self.claim} needs a witness")
        if self.status == UNKNOWN and "budget" in self.parameters:
            if self.budget_spent != self.parameters["budget"]:
                raise ValueError("unknown verdicts must spend the whole budget")

    def to_json_dict(self) -> dict:
        return {
            "claim": self.claim,
            "status": self.status,
            "witness": _jsonable(self.witness),
            "budget_spent": self.budget_spent,
            "parameters": _jsonable(self.parameters),
        }


def _jsonable(value):
    if isinstance(value, (frozenset, set)):
        return sorted(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def bundle_status(certs) -> str:
    """Worst status of a bundle: refuted beats unknown beats verified."""
    statuses = {c.status for c in certs}
    if REFUTED in statuses:
        return REFUTED
    if UNKNOWN in statuses:
        return UNKNOWN
    return VERIFIED


def bundle_to_json(certs, indent=None) -> str:
    return json.dumps(
        [c.to_json_dict() for c in certs], sort_keys=True, indent=indent
    )
