"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 2, ResourceLimitError -> 3.
Failed verification checks are ordinary report entries, not exceptions.
"""


class HornforgeError(Exception):
    pass


class InputError(HornforgeError):
    """Malformed or out-of-contract input (bad file, unknown variable, ...)."""


class ResourceLimitError(HornforgeError):
    """A configured limit (variables, closure cap, search nodes) was exceeded."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})
