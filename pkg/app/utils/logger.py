"""
Configurazione logging strutturato per l'applicazione.

Fornisce logger configurati per diversi ambienti (development, production)
con formattazione appropriata. I log vanno su stderr: stdout resta riservato
ai risultati stampati dai comandi.

Usage:
    >>> from app.utils.logger import get_logger
    >>> logger = get_logger(__name__)
    >>> logger.info("Run completato", extra={"n_steps": 6000})
"""
import logging
import sys
from typing import Optional
from app.core.config import ENVIRONMENT, DEBUG


# --- CONFIGURAZIONE FORMATO LOG ---

# Formato per development: più leggibile
DEV_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Formato per production: include più metadati per parsing automatico
PROD_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"


def _default_level() -> int:
    if DEBUG or ENVIRONMENT == "development":
        return logging.DEBUG
    return logging.INFO


def _formatter() -> logging.Formatter:
    if ENVIRONMENT == "production":
        return logging.Formatter(PROD_FORMAT)
    return logging.Formatter(DEV_FORMAT)


def get_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """
    Crea e configura un logger per il modulo specificato.

    Il logger propaga al root logger: l'handler viene installato una sola
    volta da configure_root_logger(). Qui si imposta solo il livello.

    Args:
        name: Nome del logger (tipicamente __name__ del modulo)
        level: Livello di log opzionale (se None, usa quello di default per l'ambiente)

    Returns:
        logging.Logger: Logger configurato

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.debug("Stato iniziale", extra={"x0": (0.999, 0.899, 0.799)})
    """
    logger = logging.getLogger(name)
    logger.setLevel(level if level is not None else _default_level())
    return logger


def configure_root_logger() -> None:
    """
    Configura il logger root dell'applicazione.

    Questa funzione dovrebbe essere chiamata una sola volta all'avvio
    della CLI (in main.py / app.api.cli.main).

    Note:
        - I logger dei moduli propagano qui
        - Chiamate ripetute non aggiungono handler duplicati
    """
    root_logger = logging.getLogger()

    if root_logger.handlers:
        return

    root_logger.setLevel(_default_level())

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(_formatter())
    root_logger.addHandler(console_handler)
