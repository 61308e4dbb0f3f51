"""
Schemas - Modelli Pydantic per configurazioni e report.

Contiene i modelli Pydantic per:
- Validazione delle sezioni del file INI
- Serializzazione dei report JSON e del manifest

Separati dai domain models per mantenere formato dei file e calcolo disaccoppiati.
"""

from .comms import CommsConfig, CommsOptions, MessageSpec
from .experiment import ExperimentConfig
from .reports import (
    ConditionResult,
    MessageFit,
    PeakMatch,
    RunManifest,
    StabilityReport,
    SweepPoint,
    SweepResult,
    SyncMetrics,
)
from .simulation import SimConfig, StabilityOptions

__all__ = [
    "CommsConfig",
    "CommsOptions",
    "MessageSpec",
    "ExperimentConfig",
    "ConditionResult",
    "MessageFit",
    "PeakMatch",
    "RunManifest",
    "StabilityReport",
    "SweepPoint",
    "SweepResult",
    "SyncMetrics",
    "SimConfig",
    "StabilityOptions",
]
