"""
Errors - Exception hierarchy shared by every pipeline stage
"""


class LinkPredictionError(Exception):
    """Base error; `stage` names the pipeline stage that raised it, if known"""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage

    def __str__(self):
        message = super().__str__()
        if self.stage:
            return f"[{self.stage}] {message}"
        return message


class GraphFormatError(LinkPredictionError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class UnknownNodeError(LinkPredictionError):
    pass


class CommunityError(LinkPredictionError):
    pass


class WalkError(LinkPredictionError):
    pass


class EmbeddingError(LinkPredictionError):
    pass


class ContentFormatError(LinkPredictionError):
    def __init__(self, message, record_number=None):
        if record_number is not None:
            message = f"record {record_number}: {message}"
        super().__init__(message)
        self.record_number = record_number


class DimensionMismatchError(LinkPredictionError):
    pass


class SplitError(LinkPredictionError):
    pass


class NegativeSamplingExhausted(SplitError):
    """Raised when rejection sampling cannot find enough non-edges"""


class ClassifierError(LinkPredictionError):
    pass


class ConfigError(LinkPredictionError):
    pass


class StageError(LinkPredictionError):
    """A stage failure, wrapping the original error"""

    def __init__(self, stage, cause):
        super().__init__(str(cause) if not isinstance(cause, LinkPredictionError)
                         else Exception.__str__(cause), stage=stage)
        self.cause = cause
