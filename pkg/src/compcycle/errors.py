"""Exception type shared by every builder and verifier."""


class CategoryError(Exception):
    """Raised when a structure cannot be built at all.

    ``code`` is a stable identifier such as ``DUPLICATE_ID`` or
    ``CYCLIC_QUIVER``; ``details`` carries the offending identifiers.
    """

    def __init__(self, code, message="", details=()):
        self.code = code
        self.details = tuple(details)
        text = f"{code}: {message}" if message else code
        super().__init__(text)
