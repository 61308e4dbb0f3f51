"""
Eccezioni custom dell'applicazione.

Definisce le eccezioni del dominio numerico che possono essere sollevate
dai service/repository e gestite centralmente dall'error handler della CLI,
che le converte in exit code.

Best Practice:
- Usare eccezioni custom per errori di dominio (input, divergenza, fit)
- Convertire le eccezioni in exit code solo in app.api.middleware
- Mantenere separazione tra calcolo e presentazione
"""
from typing import Optional, Any, Dict


class ApplicationError(Exception):
    """
    Classe base per tutte le eccezioni custom dell'applicazione.

    Attributes:
        message: Messaggio di errore leggibile
        details: Dizionario opzionale con dettagli aggiuntivi
        error_code: Codice errore machine-readable
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: Optional[str] = None
    ):
        self.message = message
        self.details = details or {}
        self.error_code = error_code or self.__class__.__name__
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """
        Converte l'eccezione in dizionario per serializzazione JSON.

        Returns:
            Dict contenente messaggio, codice errore e dettagli
        """
        return {
            "error": self.error_code,
            "message": self.message,
            "details": self.details
        }


class InvalidInputError(ApplicationError):
    """
    Eccezione sollevata quando un'operazione riceve argomenti fuori dominio.

    Example:
        >>> raise InvalidInputError(
        ...     message="k deve essere finito",
        ...     details={"k": float("nan")}
        ... )
    """

    def __init__(self, message: str = "Invalid input", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, details=details, error_code="INVALID_INPUT")


class ValidationError(ApplicationError):
    """
    Eccezione sollevata per errori di validazione della configurazione.

    Diversa dalla ValidationError di Pydantic: questa porta con sé il
    contesto del file INI (sezione, chiave, riga) per messaggi utili.

    Example:
        >>> raise ValidationError(
        ...     message="h deve essere positivo",
        ...     details={"section": "sim", "key": "h", "line": 2}
        ... )
    """

    def __init__(self, message: str = "Validation failed", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, details=details, error_code="VALIDATION_ERROR")


class ConfigError(ApplicationError):
    """
    Eccezione sollevata quando la configurazione non è leggibile o è malformata
    (file mancante, sintassi INI, griglia sigma vuota).
    """

    def __init__(self, message: str = "Configuration error", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, details=details, error_code="CONFIG_ERROR")


class DegenerateInputError(ApplicationError):
    """
    Eccezione sollevata per serie degeneri: varianza nulla, troppo pochi campioni.

    Example:
        >>> raise DegenerateInputError(
        ...     message="Serie x a varianza nulla",
        ...     details={"n_samples": 100}
        ... )
    """

    def __init__(self, message: str = "Degenerate input", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, details=details, error_code="DEGENERATE_INPUT")


class IntegrationDivergedError(ApplicationError):
    """
    Eccezione sollevata quando l'integrazione produce uno stato non finito
    o supera la sentinella di divergenza.

    Attributes:
        step_index: Indice del passo in cui è stata rilevata la divergenza

    Note:
        - Lo step_index è sempre incluso anche nei details
    """

    def __init__(
        self,
        message: str = "Integration diverged",
        step_index: int = 0,
        details: Optional[Dict[str, Any]] = None
    ):
        self.step_index = step_index
        merged = {"step_index": step_index}
        merged.update(details or {})
        super().__init__(message=message, details=merged, error_code="INTEGRATION_DIVERGED")


class FitFailedError(ApplicationError):
    """
    Eccezione sollevata quando il fit sinusoidale non converge.

    I details contengono il seed usato e il messaggio dell'ottimizzatore.
    """

    def __init__(self, message: str = "Fit failed", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, details=details, error_code="FIT_FAILED")


class ArtifactIOError(ApplicationError):
    """
    Eccezione sollevata per errori del file system durante la scrittura
    o la lettura degli artefatti.

    Note:
        - Loggare sempre il path coinvolto
    """

    def __init__(self, message: str = "Artifact IO error", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, details=details, error_code="ARTIFACT_IO_ERROR")
