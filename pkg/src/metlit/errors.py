"""Shared error type for malformed or inconsistent input files."""


class InputError(ValueError):
    """Raised when an input file is malformed or violates a data invariant.

    Carries the file path and, when known, the 1-based line number so the
    CLI can point at the offending record.
    """

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        loc = ""
        if path is not None:
            loc = f"{path}: "
            if line_no is not None:
                loc = f"{path}:{line_no}: "
        super().__init__(loc + message)
