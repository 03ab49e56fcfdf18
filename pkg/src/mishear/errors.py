"""Exception types raised across the package."""


class MishearError(ValueError):
    """Base class for domain errors."""


class CorpusError(MishearError):
    """Malformed or empty corpus input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FitError(MishearError):
    """The word-length fit could not be carried out or did not converge.

    ``best`` holds the last ``(alpha, beta)`` iterate when the optimizer ran.
    """

    def __init__(self, message, best=None):
        self.best = best
        super().__init__(message)


class SupportError(MishearError):
    """Requested word length lies where ``lexicon_size * p_n <= 1``."""


class NoCrossingError(MishearError):
    """A threshold or crossover could not be located."""
