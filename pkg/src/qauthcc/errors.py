"""Exception hierarchy shared by every layer of the laboratory."""


class QAuthError(Exception):
    """Base class for all errors raised by qauthcc."""


class InvalidSizeError(QAuthError, ValueError):
    pass


class QubitIndexError(QAuthError, IndexError):
    pass


class ArgumentError(QAuthError, ValueError):
    pass


class EntangledError(QAuthError):
    """A qubit was asked to be factored out while still entangled."""


class ConfigurationError(QAuthError, ValueError):
    pass


class CapacityError(QAuthError):
    pass


class ProtocolLogicError(QAuthError):
    """A party touched a qubit it does not own, or similar misuse."""


class SessionStateError(QAuthError):
    pass


class BudgetError(QAuthError, ValueError):
    pass


class UnclassifiableError(QAuthError):
    pass


class NonlinearityError(QAuthError):
    """Measured counts are not affine in the size parameters."""


class ComparisonError(QAuthError):
    pass


class UnsupportedError(QAuthError):
    pass


class UnknownProtocolError(ArgumentError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
