"""
Pydantic Schemas per la pipeline di comunicazione a mascheramento caotico.

Definiscono i messaggi sinusoidali m_i(t) = offset + b sin(2 pi f t),
la sezione [comms] del file di configurazione e la configurazione
completa di un run di codifica/decodifica.
"""
import math
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.simulation import SimConfig


InjectionMode = Literal["mask", "drive"]
"""
Punto di iniezione dei messaggi.

- mask: il master evolve indisturbato, lo slave riceve x~ = x + m
- drive: m_i viene sommato alla derivata i-esima del master
"""


class MessageSpec(BaseModel):
    """
    Parametri di un messaggio sinusoidale.

    Attributes:
        offset: Costante additiva del messaggio (default 0)
        amplitude: Intensità b_m del segnale (>= 0)
        freq: Frequenza in cicli per unità di tempo (> 0)

    Note:
        - Il limite di Nyquist dipende da h e viene verificato in CommsConfig
    """
    model_config = ConfigDict(frozen=True)

    offset: float = Field(default=0.0)
    amplitude: float = Field(default=0.01, ge=0)
    freq: float = Field(..., gt=0)

    @model_validator(mode="after")
    def check_finite(self):
        if not all(math.isfinite(v) for v in (self.offset, self.amplitude, self.freq)):
            raise ValueError("offset, amplitude e freq devono essere finiti")
        return self


class CommsOptions(BaseModel):
    """
    Sezione [comms] del file di configurazione.

    Attributes:
        amplitude: Intensità comune dei tre messaggi (default 0.01)
        offset: Offset comune dei messaggi (default 0)
        injection: Punto di iniezione (mask | drive)
        n_steps: Passi del run di comunicazione (default 41999: 2000 di transitorio
                 + 40000 campioni di analisi, cioè una finestra lunga 2000)
        transient_steps: Transitorio scartato prima della decodifica
        band_half_bins: Semi-ampiezza della banda passante automatica, in bin

    Note:
        - Con h = 0.05 e finestra 2000 i bin distano 0.0005: ogni frequenza
          dei casi, multipla di 0.001, cade su un bin esatto e la sua linea
          non disperde potenza fuori dalla banda
    """
    model_config = ConfigDict(frozen=True)

    amplitude: float = Field(default=0.01, ge=0)
    offset: float = Field(default=0.0)
    injection: InjectionMode = Field(default="mask")
    n_steps: int = Field(default=41999, gt=0)
    transient_steps: int = Field(default=2000, ge=0)
    band_half_bins: float = Field(default=1.5, gt=0)

    @model_validator(mode="after")
    def check_transient(self):
        if self.transient_steps >= self.n_steps:
            raise ValueError("transient_steps deve essere minore di n_steps")
        return self


class CommsConfig(BaseModel):
    """
    Configurazione completa di un run di comunicazione.

    Attributes:
        sim: Parametri del run accoppiato (sigma incluso)
        messages: I tre messaggi m1, m2, m3
        injection: Punto di iniezione
        band_half_bins: Semi-ampiezza della banda automatica, in bin
        bands: Bande (f_lo, f_hi) per messaggio; None = banda automatica

    Validations:
        - frequenze dei messaggi distinte
        - ogni frequenza sotto Nyquist = 1 / (2h)
    """
    model_config = ConfigDict(frozen=True)

    sim: SimConfig
    messages: Tuple[MessageSpec, MessageSpec, MessageSpec]
    injection: InjectionMode = "mask"
    band_half_bins: float = Field(default=1.5, gt=0)
    bands: Optional[Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]] = None

    @model_validator(mode="after")
    def check_frequencies(self):
        freqs = [m.freq for m in self.messages]
        if len(set(freqs)) != len(freqs):
            raise ValueError("le frequenze dei messaggi devono essere distinte")
        nyquist = 0.5 / self.sim.h
        if any(f >= nyquist for f in freqs):
            raise ValueError(f"ogni frequenza deve essere sotto Nyquist ({nyquist})")
        return self

    @property
    def frequencies(self) -> Tuple[float, float, float]:
        return tuple(m.freq for m in self.messages)

    def band_for(self, index: int, bin_width: float) -> Tuple[float, float]:
        """
        Banda passante per il messaggio index (0-based).

        Senza bande esplicite: f +- min(band_half_bins * bin_width, 0.45 *
        distanza dalla frequenza più vicina tra gli altri messaggi).

        Args:
            index: Indice del messaggio
            bin_width: Risoluzione dello spettro della finestra di analisi

        Example:
            >>> config.band_for(2, 0.0005)
            (1.24925, 1.25075)
        """
        if self.bands is not None:
            return self.bands[index]
        freqs = self.frequencies
        target = freqs[index]
        gap = min(abs(target - f) for i, f in enumerate(freqs) if i != index)
        half = min(self.band_half_bins * bin_width, 0.45 * gap)
        return (target - half, target + half)
