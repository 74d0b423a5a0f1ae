"""Exception types shared across the package."""


class CooccurError(Exception):
    """Base class for all errors raised by this library."""


class ParseError(CooccurError):
    """Input text could not be decoded (malformed JSON, XML, or TSV)."""


class FormatError(CooccurError):
    """Input decoded but violates the expected schema or field rules."""


class VocabularyError(CooccurError):
    """Label vocabulary is inconsistent or a label name is unknown."""


class IntegrityError(CooccurError):
    """An annotation references an image or category that does not exist."""


class RangeError(CooccurError):
    """A numeric field is outside its permitted range."""


class DegenerateInputError(CooccurError):
    """The operation is undefined for this input (e.g. zero images)."""


class ConsistencyError(CooccurError):
    """Derived inputs contradict each other (e.g. itemsets not subset-closed)."""


class SizeLimitError(CooccurError):
    """Input exceeds a guard limit meant to prevent combinatorial blow-up."""


class UsageError(CooccurError):
    """Invalid argument or configuration value."""
