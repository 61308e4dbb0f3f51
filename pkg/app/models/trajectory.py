"""
Domain Model per traiettorie campionate e bound del master.

Una Trajectory è il risultato di un'integrazione a passo fisso: array numpy
allineati per indice di campione, con griglia temporale t[i] = i * h
costruita (mai accumulata).
"""
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from app.core.exceptions import InvalidInputError


@dataclass(frozen=True)
class Bounds:
    """
    Bound superiori dei valori assoluti delle variabili del master.

    Attributes:
        M: max |x1|
        N: max |x2|
        P: max |x3|
    """
    M: float
    N: float
    P: float

    def __post_init__(self) -> None:
        for name in ("M", "N", "P"):
            if getattr(self, name) < 0:
                raise InvalidInputError(
                    message=f"Il bound {name} deve essere >= 0",
                    details={name: getattr(self, name)}
                )


@dataclass(frozen=True)
class Trajectory:
    """
    Registrazione temporale di master, slave ed errore.

    Attributes:
        t: Istanti di campionamento, shape (n,)
        x: Stati del master, shape (n, 3)
        h: Passo di integrazione
        y: Stati dello slave, shape (n, 3) (None per run solo master)
        E: Errore generalizzato, shape (n, 3) (None per run solo master)
        transmitted: Canali trasmessi x~ = x + m (solo run di comunicazione)
        start_index: Indice del primo campione rispetto al run originale

    Business Rules:
        - Tutti gli array hanno la stessa lunghezza
        - t[i] = (start_index + i) * h
    """
    t: np.ndarray
    x: np.ndarray
    h: float
    y: Optional[np.ndarray] = None
    E: Optional[np.ndarray] = None
    transmitted: Optional[np.ndarray] = None
    start_index: int = 0

    def __post_init__(self) -> None:
        n = len(self.t)
        for name in ("x", "y", "E", "transmitted"):
            array = getattr(self, name)
            if array is not None and len(array) != n:
                raise InvalidInputError(
                    message=f"Lunghezza di {name} diversa da quella di t",
                    details={"field": name, "expected": n, "actual": len(array)}
                )

    def __len__(self) -> int:
        return len(self.t)

    @property
    def sample_rate(self) -> float:
        """Campioni per unità di tempo (1/h)."""
        return 1.0 / self.h

    @property
    def is_coupled(self) -> bool:
        return self.y is not None

    @property
    def sync_error3(self) -> Optional[np.ndarray]:
        """Errore di sincronizzazione semplice e3 = y3 - x3."""
        if self.y is None:
            return None
        return self.y[:, 2] - self.x[:, 2]

    def suffix(self, start: int) -> "Trajectory":
        """
        Restituisce la traiettoria a partire dal campione di indice start.

        Gli array sono viste sul run originale: nessuna copia.
        """
        def cut(array: Optional[np.ndarray]) -> Optional[np.ndarray]:
            return None if array is None else array[start:]

        return replace(
            self,
            t=self.t[start:],
            x=self.x[start:],
            y=cut(self.y),
            E=cut(self.E),
            transmitted=cut(self.transmitted),
            start_index=self.start_index + start,
        )
