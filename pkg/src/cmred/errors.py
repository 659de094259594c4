"""Exception types shared across the package."""


class CmredError(Exception):
    """Base class for all library errors."""


class ElementCapExceeded(CmredError):
    """Group enumeration would exceed the configured element cap."""


class SubgroupNotContained(CmredError):
    """A subgroup generator is not an element of the ambient group."""


class SubsetCapExceeded(CmredError):
    """A subset enumeration would exceed the configured cap (or degree > 64)."""


class BruteCapExceeded(CmredError):
    """A brute-force convolution path was requested beyond the brute cap."""


class UnsupportedParameter(CmredError):
    """A zoo family or parameter outside the supported range."""


class ParseError(CmredError):
    """Malformed spec string or group file."""


class BuildVerificationError(CmredError):
    """A zoo construction failed one of its build-time checks (order,
    form preservation, point count, stabilizer)."""
