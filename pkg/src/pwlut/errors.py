"""Exception types shared across the package.

Each class maps onto one CLI exit status, see :mod:`pwlut.cli`.
"""


class PwlutError(Exception):
    code = "ERROR"


class ArgumentError(PwlutError, ValueError):
    code = "ARGUMENT"


class DomainError(PwlutError, ValueError):
    code = "DOMAIN"


class RangeError(PwlutError, ValueError):
    code = "RANGE"


class ExportError(PwlutError, OSError):
    code = "IO"
