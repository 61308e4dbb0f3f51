"""
Validatori riusabili per i service numerici.

Contiene funzioni di validazione usate dai service per verificare
precondizioni delle operazioni (finitezza, range, bande di frequenza).

Differenza con Pydantic validators:
- Pydantic: validazione formato della configurazione (file INI)
- Questi: precondizioni delle singole operazioni numeriche
"""
import math

import numpy as np

from app.core.exceptions import InvalidInputError, DegenerateInputError


def validate_finite(value: float, field_name: str = "value") -> float:
    """
    Valida che uno scalare sia finito.

    Args:
        value: Valore da controllare
        field_name: Nome del campo (per messaggi errore)

    Returns:
        float: Il valore convertito a float

    Raises:
        InvalidInputError: Se il valore è NaN o infinito

    Example:
        >>> validate_finite(0.5, "k")
        0.5
    """
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(
            message=f"{field_name} deve essere finito",
            details={"field": field_name, "value": repr(value)}
        )
    return value


def validate_positive(value: float, field_name: str) -> float:
    """
    Valida che uno scalare sia finito e strettamente positivo.

    Raises:
        InvalidInputError: Se value <= 0 o non finito
    """
    value = validate_finite(value, field_name)
    if value <= 0:
        raise InvalidInputError(
            message=f"{field_name} deve essere positivo",
            details={"field": field_name, "value": value}
        )
    return value


def validate_band(f_lo: float, f_hi: float, nyquist: float) -> None:
    """
    Valida una banda passante 0 < f_lo < f_hi < Nyquist.

    Args:
        f_lo: Bordo inferiore (cicli per unità di tempo)
        f_hi: Bordo superiore
        nyquist: Frequenza di Nyquist del segnale

    Raises:
        InvalidInputError: Se la banda è vuota o fuori range

    Example:
        >>> validate_band(0.9, 1.1, 10.0)  # OK
        >>> validate_band(1.1, 0.9, 10.0)  # InvalidInputError
    """
    if not (0.0 < f_lo < f_hi < nyquist):
        raise InvalidInputError(
            message="La banda deve soddisfare 0 < f_lo < f_hi < Nyquist",
            details={"f_lo": f_lo, "f_hi": f_hi, "nyquist": nyquist}
        )


def validate_series(series: np.ndarray, min_length: int, field_name: str = "series") -> np.ndarray:
    """
    Converte una sequenza in array float 1-D e ne verifica la lunghezza minima.

    Raises:
        DegenerateInputError: Se la serie ha meno di min_length campioni
    """
    array = np.asarray(series, dtype=float)
    if array.ndim != 1:
        raise InvalidInputError(
            message=f"{field_name} deve essere monodimensionale",
            details={"field": field_name, "shape": list(array.shape)}
        )
    if array.size < min_length:
        raise DegenerateInputError(
            message=f"{field_name} richiede almeno {min_length} campioni",
            details={"field": field_name, "n_samples": int(array.size), "min_length": min_length}
        )
    return array
