"""
Gestione centralizzata degli errori per la CLI.

Converte le eccezioni custom del dominio in exit code, con log
strutturato su stderr. È l'unico punto in cui un'eccezione diventa
un codice di uscita.

Exit code:
- 0 successo
- 2 errore di configurazione o di input
- 3 divergenza numerica o fit non convergente
- 4 errore di I/O sugli artefatti
- 1 errore non previsto
"""
import functools
import sys
from typing import Callable

from app.core.config import DEBUG
from app.core.exceptions import (
    ApplicationError,
    ArtifactIOError,
    ConfigError,
    DegenerateInputError,
    FitFailedError,
    IntegrationDivergedError,
    InvalidInputError,
    ValidationError,
)
from app.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1

# Mappa il tipo di eccezione all'exit code
EXIT_CODE_MAP = {
    ValidationError: 2,
    ConfigError: 2,
    InvalidInputError: 2,
    DegenerateInputError: 2,
    IntegrationDivergedError: 3,
    FitFailedError: 3,
    ArtifactIOError: 4,
}


def exit_code_for(exc: BaseException) -> int:
    """Exit code associato all'eccezione (1 se non mappata)."""
    return EXIT_CODE_MAP.get(type(exc), EXIT_UNEXPECTED)


def handle_errors(func: Callable[..., object]) -> Callable[..., int]:
    """
    Decoratore che esegue un comando e restituisce il suo exit code.

    - ApplicationError: log ERROR con codice e dettagli, messaggio su stderr
    - Eccezioni non previste: log con stack trace, exit code 1

    Example:
        >>> @handle_errors
        ... def cmd(args):
        ...     raise ConfigError("file mancante")
        >>> cmd(None)
        2
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            func(*args, **kwargs)
        except ApplicationError as exc:
            code = exit_code_for(exc)
            logger.error(
                "Application Error",
                extra={
                    "error_type": type(exc).__name__,
                    "error_code": exc.error_code,
                    "details": exc.details,
                    "exit_code": code,
                }
            )
            print(f"error [{exc.error_code}]: {exc.message} {exc.details}", file=sys.stderr)
            return code
        except Exception as exc:
            logger.exception(
                "Unhandled Exception",
                extra={"error_type": type(exc).__name__, "error_message": str(exc)}
            )
            message = str(exc) if DEBUG else "errore interno"
            print(f"error [INTERNAL_ERROR]: {message}", file=sys.stderr)
            return EXIT_UNEXPECTED
        return EXIT_OK
    return wrapper
