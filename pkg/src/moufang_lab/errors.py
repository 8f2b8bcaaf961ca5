"""Exception hierarchy shared by all modules."""


class MoufangLabError(Exception):
    """Base class for every error raised by this package."""


class StructureError(MoufangLabError, ValueError):
    """An object violates a structural invariant (ring mismatch, broken unit, non-Latin table...)."""


class ScalarDivisionError(MoufangLabError, ZeroDivisionError):
    pass


class UnsupportedError(MoufangLabError, ValueError):
    """Operation or mode not available for the given input."""


class ResourceError(MoufangLabError, RuntimeError):
    """A configured resource bound would be exceeded."""


class ContractError(MoufangLabError, RuntimeError):
    """A post-condition or input contract failed (signals a bug or a bad argument)."""
