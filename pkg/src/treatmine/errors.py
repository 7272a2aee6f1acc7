"""Shared exception types for the pipeline."""


class PipelineError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(PipelineError):
    """A value, state, or parameter set does not conform to its visible schema."""


class IngestionError(PipelineError):
    """A raw record cannot be ingested (conflicting types, duplicate ids, ...)."""


class ParseError(PipelineError):
    """An input file cannot be parsed; message carries the offending location."""


class StageError(PipelineError):
    """A pipeline stage is missing a required predecessor artifact."""
