from .error_handler import errors_handler
