"""
Error hierarchy shared by every orbifrob package
Each error carries enough structure for the CLI to print it as JSON
"""

from typing import Any, Dict, List, Optional


class OrbifrobError(Exception):
    """Base class for all structured failures"""

    kind = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload = {"error": self.kind, "message": self.message}
        for key, value in self.details.items():
            payload[key] = value if isinstance(value, (int, float, bool, list, dict)) or value is None else str(value)
        return payload


class UnknownVariableError(OrbifrobError, KeyError):
    kind = "unknown-variable"

    def __init__(self, name: str):
        super().__init__(f"Unknown variable: {name}", variable=name)
        self.name = name

    def __str__(self) -> str:
        return self.message


class NormalizationError(OrbifrobError, ValueError):
    kind = "normalization"


class PositiveDimensionalIdealError(OrbifrobError):
    """The quotient is infinite; `witness` is a variable with no pure-power leading term"""

    kind = "positive-dimensional"

    def __init__(self, witness: str):
        super().__init__(f"Ideal is not zero-dimensional: no pure power of {witness} is a leading monomial",
                         witness=witness)
        self.witness = witness


class ResourceCapError(OrbifrobError):
    kind = "resource-cap"


class InconsistentSystemError(OrbifrobError):
    """Linear system has no solution; `row` is the violated pivot row of the reduced matrix"""

    kind = "inconsistent"

    def __init__(self, row: int, message: Optional[str] = None):
        super().__init__(message or f"Inconsistent linear system at reduced row {row}", row=row)
        self.row = row


class DegeneratePointError(OrbifrobError):
    kind = "degenerate-point"


class SolveError(OrbifrobError):
    """WDVV-driven coefficient solve got stuck or found a contradiction"""

    kind = "solve"

    def __init__(self, message: str, degree: Optional[int] = None, residual: Optional[str] = None,
                 unknowns: Optional[List[str]] = None):
        super().__init__(message, degree=degree, residual=residual, unknowns=unknowns)
        self.degree = degree
        self.residual = residual
        self.unknowns = unknowns or []


class MissingCapError(OrbifrobError):
    kind = "missing-cap"


class StructuralError(OrbifrobError):
    kind = "structural"


class CheckFailure(OrbifrobError):
    """A verification ran to completion and found a mismatch"""

    kind = "check-failure"
