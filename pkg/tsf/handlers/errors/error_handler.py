import logging

from django.core.management.base import CommandError
from marshmallow import ValidationError

from tsf.exceptions import (ConfigError, ContractError, DegenerateGraphError, DimensionError, IngestionError,
                            ModelFileError, PreprocessingError, SpecError, TsfError)

RUNTIME_FAILURE = 1


def errors_handler(subcommand: str, exception: Exception) -> CommandError:
    """
    Turns a library exception into a one-line CommandError.
    :param subcommand: name of the failing subcommand
    :param exception: the raised exception
    :return: CommandError carrying "<kind>: <message>" and exit status 1
    """

    if isinstance(exception, IngestionError):
        logging.exception(f'{subcommand}: input file rejected (row {exception.row})')
    elif isinstance(exception, (ConfigError, SpecError)):
        logging.exception(f'{subcommand}: invalid configuration')
    elif isinstance(exception, ModelFileError):
        logging.exception(f'{subcommand}: unreadable archive')
    elif isinstance(exception, DegenerateGraphError):
        logging.exception(f'{subcommand}: modality graph needs at least two nodes')
    elif isinstance(exception, (DimensionError, ContractError, PreprocessingError)):
        logging.exception(f'{subcommand}: {exception.kind} failure')
    elif isinstance(exception, TsfError):
        logging.exception(f'{subcommand}: {exception}')
    elif isinstance(exception, ValidationError):
        logging.exception(f'{subcommand}: validation failed')
        return CommandError(f"config: {exception.messages}", returncode=RUNTIME_FAILURE)
    else:
        raise exception

    message = " ".join(str(exception).split())
    return CommandError(f"{exception.kind}: {message}", returncode=RUNTIME_FAILURE)
