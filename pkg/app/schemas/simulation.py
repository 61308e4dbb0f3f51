"""
Pydantic Schemas per la configurazione delle simulazioni.

Questi schemi definiscono la struttura delle sezioni [sim], [sigma] e
[stability] del file di configurazione, con validazione automatica.

IMPORTANTE: Separazione tra Models e Schemas
---------------------------------------------
- Models (app/models/): valori di dominio usati nei calcoli
- Schemas (questo file): configurazione validata e serializzabile

Gli schemi sono frozen: una configurazione risolta non cambia più e
la sua serializzazione JSON è la base dell'hash della directory di run.
"""
import math
from typing import Annotated, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.gls import CONTROL_TERMS, SigmaVec, StateVec


Triple = Tuple[float, float, float]

# Singola componente di sigma, in [-1, 1]
SigmaComponent = Annotated[float, Field(ge=-1.0, le=1.0)]


class SimConfig(BaseModel):
    """
    Parametri di un run accoppiato master/slave.

    Attributes:
        h: Passo di integrazione (default 0.05)
        n_steps: Numero di passi (la traiettoria ha n_steps + 1 campioni)
        transient_steps: Campioni scartati prima dell'analisi (default 2000, t=100)
        k: Parametro del sistema (default 0.5)
        x0: Stato iniziale del master
        y0: Stato iniziale dello slave
        sigma: Parametri di controllo, ciascuno in [-1, 1]
        disabled_terms: Sotto-termini del controllo azzerati (ablazione)

    Validations:
        - h > 0
        - transient_steps < n_steps
        - componenti finite per x0, y0, sigma
    """
    model_config = ConfigDict(frozen=True)

    h: float = Field(default=0.05, gt=0, description="Passo di integrazione")
    n_steps: int = Field(default=6000, gt=0, description="Numero di passi di integrazione")
    transient_steps: int = Field(default=2000, ge=0, description="Campioni scartati come transitorio")
    k: float = Field(default=0.5, description="Parametro del sistema")
    x0: Triple = Field(default=(0.999, 0.899, 0.799), description="Stato iniziale del master")
    y0: Triple = Field(default=(1.0, 1.0, 1.0), description="Stato iniziale dello slave")
    sigma: Tuple[SigmaComponent, SigmaComponent, SigmaComponent] = Field(default=(1.0, 1.0, 1.0), description="Parametri di controllo")
    disabled_terms: Tuple[str, ...] = Field(default=(), description="Sotto-termini di controllo disattivati")

    @field_validator("h", "k")
    @classmethod
    def check_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("deve essere un numero finito")
        return value

    @field_validator("x0", "y0")
    @classmethod
    def check_state(cls, value: Triple) -> Triple:
        if not all(math.isfinite(v) for v in value):
            raise ValueError("tutte le componenti devono essere finite")
        return value

    @field_validator("disabled_terms")
    @classmethod
    def check_terms(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        unknown = [name for name in value if name not in CONTROL_TERMS]
        if unknown:
            raise ValueError(f"sotto-termini sconosciuti: {unknown}; ammessi: {list(CONTROL_TERMS)}")
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def check_transient(self):
        """Il transitorio deve lasciare almeno un campione di analisi."""
        if self.transient_steps >= self.n_steps:
            raise ValueError("transient_steps deve essere minore di n_steps")
        return self

    @property
    def sigma_vec(self) -> SigmaVec:
        return SigmaVec(*self.sigma)

    @property
    def x0_vec(self) -> StateVec:
        return StateVec(*self.x0)

    @property
    def y0_vec(self) -> StateVec:
        return StateVec(*self.y0)

    @property
    def disabled(self) -> frozenset:
        return frozenset(self.disabled_terms)


class StabilityOptions(BaseModel):
    """
    Sezione [stability]: lunghezza del run per i bound e override opzionale.

    Attributes:
        bounds_steps: Passi del run libero del master (default 40000, t=2000)
        M, N, P: Se tutti presenti, la simulazione viene saltata
    """
    model_config = ConfigDict(frozen=True)

    bounds_steps: int = Field(default=40000, gt=0)
    M: Optional[float] = Field(default=None, ge=0)
    N: Optional[float] = Field(default=None, ge=0)
    P: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_override(self):
        given = [v is not None for v in (self.M, self.N, self.P)]
        if any(given) and not all(given):
            raise ValueError("l'override dei bound richiede M, N e P insieme")
        return self

    @property
    def has_override(self) -> bool:
        return self.M is not None
