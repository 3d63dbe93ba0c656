"""Error type shared by every module.

All domain failures raise :class:`DomainError` carrying a stable upper-case
``code`` (``ROW_SUM``, ``PARAM_MISMATCH``, ...) so callers and the CLI can
branch on it without parsing messages.
"""


class DomainError(ValueError):
    def __init__(self, code, message, **context):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.context = context


class WorkspaceError(DomainError):
    """A workspace file problem, optionally pinned to a 1-based line."""

    def __init__(self, code, message, line=None, **context):
        where = f" (line {line})" if line is not None else ""
        super().__init__(code, message + where, line=line, **context)
        self.line = line
