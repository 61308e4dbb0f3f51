"""
Pydantic Schema della configurazione completa di un esperimento.

Raccoglie le sezioni del file INI: [sim] + [sigma] in SimConfig,
[stability] in StabilityOptions, [comms] in CommsOptions.
"""
from pydantic import BaseModel, ConfigDict, Field

from app.schemas.comms import CommsOptions
from app.schemas.simulation import SimConfig, StabilityOptions


class ExperimentConfig(BaseModel):
    """
    Configurazione risolta di un esperimento.

    Note:
        - Ogni sezione assente nel file prende i default
        - render_config() in app.api.dependencies produce l'echo canonico
    """
    model_config = ConfigDict(frozen=True)

    sim: SimConfig = Field(default_factory=SimConfig)
    stability: StabilityOptions = Field(default_factory=StabilityOptions)
    comms: CommsOptions = Field(default_factory=CommsOptions)
