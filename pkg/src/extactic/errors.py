"""Exception hierarchy shared by the library and the command line.

The CLI maps each family onto an exit code: input problems exit with 2,
broken algebraic invariants with 3, falsified claims with 4.
"""


class ExtacticError(Exception):
    """Base class for all library errors."""

    exit_code = 1
    kind = "error"

    def to_json(self):
        return {"error": self.kind, "message": str(self)}


class InputError(ExtacticError, ValueError):
    exit_code = 2
    kind = "input"


class ParseError(InputError):
    kind = "parse"

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)

    def to_json(self):
        body = super().to_json()
        body["position"] = self.position
        return body


class InvariantViolation(ExtacticError, ArithmeticError):
    """An exactness guarantee of an upstream computation did not hold."""

    exit_code = 3
    kind = "invariant"


class InexactDivision(InvariantViolation):
    kind = "inexact-division"


class ClaimFalsified(ExtacticError):
    """A verified statement (bound, count, identity) failed on a concrete input."""

    exit_code = 4
    kind = "falsified"
