"""
Domain Model per il Generalized Lorenz System (GLS) master/slave.

Valori immutabili usati da tutte le operazioni di app.services.gls_core.
Sono NamedTuple: leggeri, hashabili e usabili direttamente nei loop di
integrazione senza conversioni.

Unità: tutte le grandezze sono adimensionali; il tempo è in unità di
tempo della simulazione (convenzione: secondi).
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from app.core.exceptions import InvalidInputError


# Nomi dei nove sotto-termini della legge di controllo
CONTROL_TERMS: Tuple[str, ...] = (
    "u_a1", "u_b1", "u_c1",
    "u_a2", "u_b2", "u_c2",
    "u_a3", "u_b3",
)


class GlsParams(NamedTuple):
    """
    Coefficienti del sistema derivati dal parametro scalare k.

    Attributes:
        k: Parametro del sistema
        a: 10 + (25/29)k
        b: 28 - (35/29)k
        c: -(8/3) - (1/87)k
        d: k - 1

    Note:
        - Costruire tramite app.services.gls_core.params_from_k
        - a > 0 per ogni k > -11.6
    """
    k: float
    a: float
    b: float
    c: float
    d: float


class StateVec(NamedTuple):
    """Stato tridimensionale del master (x) o dello slave (y)."""
    v1: float
    v2: float
    v3: float


class SigmaVec(NamedTuple):
    """
    Terna dei parametri di controllo (sigma1, sigma2, sigma3).

    Ogni componente vive in [-1, 1]: con E3 -> 0 lo slave segue
    y3 = -sigma3 * x3, quindi solo questo intervallo copre le pendenze
    da +1 a -1 del grafico di sincronizzazione.
    """
    s1: float
    s2: float
    s3: float

    @classmethod
    def checked(cls, s1: float, s2: float, s3: float) -> "SigmaVec":
        """
        Costruisce una SigmaVec verificando il range [-1, 1].

        Raises:
            InvalidInputError: Se una componente è fuori range o non finita
        """
        values = (float(s1), float(s2), float(s3))
        for index, value in enumerate(values, start=1):
            if not math.isfinite(value) or not -1.0 <= value <= 1.0:
                raise InvalidInputError(
                    message=f"sigma{index} deve essere in [-1, 1]",
                    details={"component": f"s{index}", "value": repr(value)}
                )
        return cls(*values)


class ErrorVec(NamedTuple):
    """
    Errore generalizzato E_i = y_i + sigma_i * x_i.

    Attributes:
        E1, E2, E3: Componenti dell'errore generalizzato
        e3: Errore di sincronizzazione semplice y3 - x3 (NaN se non calcolato)
    """
    E1: float
    E2: float
    E3: float
    e3: float = math.nan


class ControlVec(NamedTuple):
    """Ingressi di controllo (u1, u2, u3) applicati allo slave."""
    u1: float
    u2: float
    u3: float


@dataclass(frozen=True)
class QMatrix:
    """
    Matrice Q della forma quadratica V' = -E^T Q E.

    Attributes:
        values: Array 3x3 (trattato come immutabile)
        form: "error_dynamics" (coefficienti incrociati dalle equazioni
              dell'errore) oppure "printed" (voci della matrice pubblicata)

    Note:
        - La parte simmetrica è l'unica rilevante per il segno di E^T Q E
        - Le due forme coincidono quando sigma3 * x3 = 0
    """
    values: np.ndarray
    form: str = "error_dynamics"

    def __post_init__(self) -> None:
        frozen = np.array(self.values, dtype=float)
        if frozen.shape != (3, 3):
            raise InvalidInputError(
                message="Q deve essere 3x3",
                details={"shape": list(frozen.shape)}
            )
        frozen.setflags(write=False)
        object.__setattr__(self, "values", frozen)

    def symmetric_part(self) -> np.ndarray:
        """Restituisce (Q + Q^T) / 2."""
        return 0.5 * (self.values + self.values.T)

    def lyapunov_rate(self, E: ErrorVec) -> float:
        """
        Calcola V' = -E^T Q E per un vettore di errore dato.

        Args:
            E: Errore generalizzato (e3 ignorato)

        Returns:
            float: Derivata temporale della funzione di Lyapunov
        """
        vector = np.array(E[:3], dtype=float)
        return float(-vector @ self.values @ vector)

    def leading_minors(self) -> Tuple[float, float, float]:
        """
        Minori principali di testa della parte simmetrica (criterio di Sylvester).

        Returns:
            Tuple con i determinanti 1x1, 2x2 e 3x3
        """
        sym = self.symmetric_part()
        return (
            float(sym[0, 0]),
            float(np.linalg.det(sym[:2, :2])),
            float(np.linalg.det(sym)),
        )
