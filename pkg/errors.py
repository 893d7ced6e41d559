from typing import Optional


class ClassforgeError(Exception):
    """Base class for every error raised by classforge operations."""

    code: str = "error"

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def to_dict(self):
        """Error payload written to stderr by the CLI."""
        return {'error': self.code, 'message': str(self)}


class InvalidInputError(ClassforgeError):
    """Input violates an operation's precondition."""

    code = "invalid-input"


class LimitExceededError(ClassforgeError):
    """A declared work or size budget was exhausted before an answer was certain."""

    code = "limit-exceeded"

    def __init__(self, budget_name: str, limit, detail: str = ""):
        message = f"{budget_name} exceeded (limit {limit})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.budget_name = budget_name
        self.limit = limit


class ConsistencyError(ClassforgeError):
    """An internal runtime verification failed."""

    code = "consistency"
