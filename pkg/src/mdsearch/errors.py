"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or inconsistent setup."""


class ContractError(ValueError):
    """An argument violates a documented precondition."""


class InadmissibleEditError(ContractError):
    """Edit at a frozen position, or with a token outside the alphabet."""


class DenoiserContractError(ContractError):
    """Denoiser output failed validation against the interface contract."""


class ParseError(ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GenerationError(RuntimeError):
    """Instance generator exhausted its rejection budget."""


class StaleTrackerError(RuntimeError):
    """Incremental violation state was driven out of sync with its candidate."""


class SampleError(RuntimeError):
    """A reverse-sampling run aborted; the cause carries the failing step."""
