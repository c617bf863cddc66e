"""Exception hierarchy shared across the simulator."""


class DiagnosisError(Exception):
    """Base class for every error raised by sramdiag."""


class DomainError(DiagnosisError, ValueError):
    """A numeric argument is outside the domain of a formula or constructor."""


class BoundsError(DiagnosisError, IndexError):
    """Address, bit index or word width does not fit the memory geometry."""


class FaultError(DiagnosisError, ValueError):
    """A fault descriptor violates its own invariants."""


class FaultConflictError(FaultError):
    """Two faults claim the same victim cell."""


class MarchParseError(DiagnosisError, ValueError):
    def __init__(self, message, position, token=""):
        super().__init__(f"{message} at position {position}" + (f" (token {token!r})" if token else ""))
        self.position = position
        self.token = token


class MarchStructureError(DiagnosisError, ValueError):
    """The algorithm does not have the shape an operation requires."""


class MergeConflictError(MarchStructureError):
    """NWRTM merge requested on an algorithm that already contains NWRC ops."""


class ProtocolError(DiagnosisError, RuntimeError):
    """PSC capture/shift used in the wrong scan_en mode."""


class StalenessError(DiagnosisError, RuntimeError):
    """SPC read before a full pattern delivery."""


class ContractError(DiagnosisError, RuntimeError):
    """Controller helper called on an element it does not apply to."""


class ModeError(DiagnosisError, RuntimeError):
    """NWRC op requested while the NWRTM control is not asserted."""


class ConfigError(DiagnosisError, ValueError):
    def __init__(self, message, field=None, line=None):
        where = []
        if field:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))
        self.field = field
        self.line = line


class ConfigParseError(ConfigError):
    """The configuration document is not well-formed JSON."""
