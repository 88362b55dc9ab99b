"""Check results and JSON-safe serialisation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from .rootdata import Weight

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    details: Dict[str, Any] = field(default_factory=dict)
    reason: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def __bool__(self) -> bool:
        return self.status != FAIL

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"status": self.status}
        if self.reason is not None:
            out["reason"] = self.reason
        out["details"] = jsonable(self.details)
        return out


def outcome(name: str, ok: bool, details: Optional[Dict[str, Any]] = None, reason: Optional[str] = None) -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, details or {}, None if ok else reason)


def skipped(name: str, reason: str, details: Optional[Dict[str, Any]] = None) -> CheckResult:
    return CheckResult(name, SKIPPED, details or {}, reason)


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _key(k: Any) -> str:
    if isinstance(k, Fraction):
        return fmt_rational(k)
    if isinstance(k, tuple):
        return ",".join(_key(x) for x in k)
    return str(k)


def jsonable(obj: Any) -> Any:
    """Convert nested results to JSON-safe values; rationals become ``"num/den"`` strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, Weight):
        return [fmt_rational(c) for c in obj.coords]
    if isinstance(obj, CheckResult):
        return obj.to_json()
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, float):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")
