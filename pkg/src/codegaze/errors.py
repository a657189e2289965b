"""Exception types shared across the pipeline."""


class CorpusError(Exception):
    """Base class for anything that goes wrong between raw files and dataset."""


class MalformedFilenameError(CorpusError):
    """Filename carries no leading participant id."""


class UnparseableRecordingError(CorpusError):
    """File has no recognizable column-header row."""


class RecordingSchemaError(CorpusError):
    """Column-header row lacks a required column."""

    def __init__(self, column: str, message: str | None = None):
        self.column = column
        super().__init__(message or f"required column missing: {column!r}")


class NoStimulusError(CorpusError):
    """No stimulus onset message found in a recording."""


class EmptyCorpusError(CorpusError):
    """Zero participants survived preprocessing."""


class DatasetFormatError(CorpusError):
    """Encoded dataset violates the documented schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
