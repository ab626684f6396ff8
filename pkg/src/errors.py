"""Exception hierarchy shared by all modules"""

from typing import Optional


class MixnumError(Exception):
    """Base class for simulator errors"""


class PlanError(MixnumError, ValueError):
    """Invalid numerology plan construction"""


class DimensionError(MixnumError, ValueError):
    """Array shape or length does not conform to the plan"""


class SignalError(MixnumError, ValueError):
    """Signal content makes the requested quantity undefined"""


class ConfigError(MixnumError):
    """Invalid experiment configuration"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)

    def __reduce__(self):
        return (self.__class__, (self.message, self.line))


class SymbolProcessingError(MixnumError):
    """A Monte-Carlo symbol failed; carries its index"""

    def __init__(self, index: int, cause: BaseException):
        self.index = index
        self.cause = cause
        super().__init__(f"symbol {index} failed: {cause}")

    def __reduce__(self):
        # worker exceptions cross a process boundary; keep only the message of the cause
        return (self.__class__, (self.index, MixnumError(str(self.cause))))
