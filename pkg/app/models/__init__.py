"""
Domain Models - Valori immutabili del sistema master/slave.

Contiene i parametri del sistema, i vettori di stato, errore e controllo,
la matrice Q e le traiettorie campionate.
"""
from app.models.gls import (
    CONTROL_TERMS,
    ControlVec,
    ErrorVec,
    GlsParams,
    QMatrix,
    SigmaVec,
    StateVec,
)
from app.models.trajectory import Bounds, Trajectory

__all__ = [
    "CONTROL_TERMS",
    "ControlVec",
    "ErrorVec",
    "GlsParams",
    "QMatrix",
    "SigmaVec",
    "StateVec",
    "Bounds",
    "Trajectory",
]
