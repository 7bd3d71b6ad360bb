"""Exception hierarchy shared by the library and the CLI error handler."""


class TsfError(Exception):
    """Base class for every error raised on purpose by the tsf package."""

    kind = "tsf"


class DimensionError(TsfError):
    kind = "dimension"


class ContractError(TsfError):
    kind = "contract"


class PreprocessingError(TsfError):
    kind = "preprocessing"


class IngestionError(TsfError):
    kind = "ingestion"

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class SpecError(TsfError):
    kind = "spec"


class ConfigError(TsfError):
    kind = "config"


class DegenerateGraphError(DimensionError):
    kind = "degenerate-graph"


class ModelFileError(TsfError):
    kind = "model-file"
