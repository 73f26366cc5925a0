"""Check results and witnesses shared by every verifier module.

A failing check always carries a concrete witness (the inputs and the
nonzero residual, rendered deterministically) so any reported violation
can be reproduced in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class PreconditionError(ValueError):
    """A structural precondition failed (e.g. a non-invariant bivector
    handed to a constructor that requires invariance)."""

    def __init__(self, message: str, witness: "Witness | None" = None):
        super().__init__(message)
        self.witness = witness


class TheoremViolation(AssertionError):
    """An identity that must hold for valid inputs failed; indicates a
    broken instance or an engine bug, never normal control flow."""


class StructureError(ValueError):
    """Malformed instance data (wrong shapes, non-antisymmetric tables)."""


@dataclass
class Witness:
    identity: str
    inputs: dict = field(default_factory=dict)
    residual: str = ""

    def render(self) -> str:
        bits = [f"identity={self.identity}"]
        for k in sorted(self.inputs):
            bits.append(f"{k}={self.inputs[k]}")
        if self.residual:
            bits.append(f"residual={self.residual}")
        return "; ".join(bits)

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "inputs": {k: str(v) for k, v in sorted(self.inputs.items())},
            "residual": self.residual,
        }


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Witness | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = f"{self.name}: {status}"
        if self.witness is not None:
            out += f" [{self.witness.render()}]"
        if self.details:
            extras = ", ".join(f"{k}={self.details[k]}" for k in sorted(self.details))
            out += f" ({extras})"
        return out

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.details:
            out["details"] = {k: str(v) for k, v in sorted(self.details.items())}
        return out


def first_failure(name: str, results, details=None) -> CheckResult:
    """Merge sub-results with a fixed ordering; first failure wins."""
    merged = CheckResult(name, True, details=dict(details or {}))
    for res in results:
        merged.details[res.name] = "pass" if res.passed else "FAIL"
        if not res.passed and merged.passed:
            merged.passed = False
            merged.witness = res.witness
    return merged
