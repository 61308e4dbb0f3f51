"""
Pydantic Schemas per i risultati serializzati: report di stabilità,
metriche di sincronizzazione, fit dei messaggi e manifest dei run.

Questi schemi definiscono la struttura dei file JSON/CSV prodotti dalla CLI.
"""
from datetime import datetime
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


# --- STABILITÀ ---

class ConditionResult(BaseModel):
    """
    Esito di una condizione di definitezza positiva.

    Attributes:
        holds: True se la condizione è soddisfatta
        margin: LHS - RHS (margin > 0 se e solo se holds)
    """
    model_config = ConfigDict(frozen=True)

    holds: bool
    margin: float

    @classmethod
    def from_margin(cls, margin: float) -> "ConditionResult":
        return cls(holds=bool(margin > 0), margin=float(margin))


class BoundsOut(BaseModel):
    """Bound M, N, P nel report."""
    model_config = ConfigDict(frozen=True)

    M: float
    N: float
    P: float


class PdWorstCase(BaseModel):
    """
    Esito del test di Sylvester sugli 8 stati d'angolo (+-M, +-N, +-P).

    Attributes:
        holds: True se tutti i minori sono positivi in tutti gli angoli
        min_minor: Minimo dei minori principali di testa
        q_form: Forma della matrice Q usata
    """
    model_config = ConfigDict(frozen=True)

    holds: bool
    min_minor: float
    q_form: str = "printed"


class StabilityReport(BaseModel):
    """
    Report completo delle condizioni di stabilità.

    Note:
        - "Definita positiva" per Q non simmetrica si legge sulla parte
          simmetrica (Q + Q^T)/2, l'unica che determina il segno di E^T Q E
        - saddle_fraction: frazione del run del master con il blocco (E1, E2)
          dell'errore a sella; None con bound imposti
    """
    model_config = ConfigDict(frozen=True)

    k: float
    params: Dict[str, float]
    bounds: BoundsOut
    bounds_source: Literal["simulated", "override"]
    symbolic: Tuple[ConditionResult, ConditionResult, ConditionResult]
    k_poly: Tuple[ConditionResult, ConditionResult, ConditionResult]
    pd_worstcase: PdWorstCase
    sigma: Tuple[float, float, float]
    interpretation: str = "symmetric_part"
    saddle_fraction: Optional[float] = None


# --- SINCRONIZZAZIONE ---

class SyncMetrics(BaseModel):
    """
    Metriche di una coppia di canali (x_i, y_i) dopo il transitorio.

    Attributes:
        pair: Identificatore della coppia ("x1y1", "x2y2", "x3y3")
        m: Pendenza della retta di regressione y_i su x_i
        dm: Errore standard della pendenza
        s_q: Qualità 1/dm (inf se dm = 0)
        r0: Correlazione incrociata normalizzata a ritardo zero
        conv_time: Tempo di convergenza di E_i (None se mai)
    """
    model_config = ConfigDict(frozen=True)

    pair: str
    m: float
    dm: float
    s_q: float
    r0: float
    conv_time: Optional[float] = None


class SweepPoint(BaseModel):
    """Un punto dello sweep: sigma e metriche delle tre coppie."""
    model_config = ConfigDict(frozen=True)

    sigma: Tuple[float, float, float]
    metrics: Tuple[SyncMetrics, SyncMetrics, SyncMetrics]


class SweepResult(BaseModel):
    """Risultato di uno sweep: un punto per sigma richiesto, in ordine di input."""
    model_config = ConfigDict(frozen=True)

    points: List[SweepPoint]

    def rows(self) -> List[Tuple]:
        """Righe del CSV "s1,s2,s3,pair,m,dm,s_q,r0,conv_time"."""
        return [
            (*point.sigma, metric.pair, metric.m, metric.dm, metric.s_q, metric.r0, metric.conv_time)
            for point in self.points
            for metric in point.metrics
        ]


# --- COMUNICAZIONE ---

class MessageFit(BaseModel):
    """
    Sinusoide recuperata per un messaggio.

    Attributes:
        message_index: Indice del messaggio (1, 2, 3)
        freq: Frequenza stimata
        amplitude: Ampiezza stimata (>= 0)
        phase: Fase in (-pi, pi]
        offset: Costante additiva
        adj_r2: R^2 aggiustato (n - 4 gradi di libertà)
    """
    model_config = ConfigDict(frozen=True)

    message_index: int = Field(..., ge=1, le=3)
    freq: float
    amplitude: float
    phase: float
    offset: float
    adj_r2: float


class PeakMatch(BaseModel):
    """
    Picco spettrale più vicino a una frequenza codificata.

    Attributes:
        target: Frequenza codificata
        freq: Frequenza del massimo locale più vicino
        distance_bins: Distanza in bin
        within_tolerance: distance_bins <= tolleranza
    """
    model_config = ConfigDict(frozen=True)

    target: float
    freq: float
    distance_bins: float
    within_tolerance: bool


# --- MANIFEST ---

class RunManifest(BaseModel):
    """
    Manifest di un'invocazione della CLI.

    Attributes:
        command: Sottocomando eseguito
        config: Echo INI della configurazione risolta
        arguments: Argomenti che influenzano i dati (preset, caso, regime, ...)
        artifacts: File prodotti, ciascuno una sola volta
        duration_seconds: Durata wall-clock
        version: Versione della libreria
        started_at: Istante di avvio (solo qui, mai nei file di dati)
    """
    command: str
    config: str
    arguments: Dict[str, Optional[str]] = Field(default_factory=dict)
    artifacts: List[str] = Field(default_factory=list)
    duration_seconds: float = 0.0
    version: str
    started_at: datetime
