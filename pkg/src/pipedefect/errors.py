"""Exception hierarchy shared across the pipeline."""


class PipeDefectError(Exception):
    """Base class for all library errors."""


class EmptyDocument(PipeDefectError):
    pass


class InvalidRating(PipeDefectError):
    pass


class InvalidSpan(PipeDefectError):
    pass


class DuplicateGoldRecord(PipeDefectError):
    pass


class CorpusTooSmall(PipeDefectError):
    pass


class LexiconRequired(PipeDefectError):
    pass


class LexiconFormatError(PipeDefectError):
    pass


class NumericalError(PipeDefectError):
    pass


class EmptySequence(PipeDefectError):
    pass


class AlignmentError(PipeDefectError):
    pass


class UnknownFrequencyTerm(PipeDefectError):
    pass


class InvalidWeight(PipeDefectError):
    pass


class MissingGold(PipeDefectError):
    pass


class ConfigError(PipeDefectError):
    pass
