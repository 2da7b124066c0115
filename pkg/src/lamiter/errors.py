"""Exception types shared across the package."""


class ResourceError(MemoryError):
    """A requested table or search would exceed the configured budget."""


class TableFormatError(ValueError):
    """A persisted range table could not be decoded."""


class BadMagicError(TableFormatError):
    pass


class TruncatedTableError(TableFormatError):
    pass


class ChecksumError(TableFormatError):
    pass


class TableKindError(ValueError):
    """Tables of the wrong kind (or mismatched limits) were supplied."""
