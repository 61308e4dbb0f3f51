"""
Service Layer per il nucleo GLS: campi vettoriali, legge di controllo,
sistema dell'errore e quantità di Lyapunov.

Tutte le funzioni sono pure: nessuno stato condiviso, valori immutabili,
sicure da chiamare in parallelo. Le formule seguono esattamente le
equazioni del modello master/slave:

- master:   x1' = a(x2 - x1), x2' = b x1 + d x2 - x1 x3, x3' = x1 x2 + c x3
- slave:    stesso campo su y più i controlli u
- errore:   E_i = y_i + sigma_i x_i
"""
from typing import FrozenSet, Literal

import numpy as np

from app.core.exceptions import InvalidInputError
from app.models.gls import (
    CONTROL_TERMS,
    ControlVec,
    ErrorVec,
    GlsParams,
    QMatrix,
    SigmaVec,
    StateVec,
)
from app.utils.validators import validate_finite


QForm = Literal["error_dynamics", "printed"]

_NO_TERMS: FrozenSet[str] = frozenset()


def params_from_k(k: float) -> GlsParams:
    """
    Calcola i coefficienti (a, b, c, d) dal parametro k.

    Args:
        k: Parametro adimensionale del sistema

    Returns:
        GlsParams: Coefficienti con k memorizzato accanto

    Raises:
        InvalidInputError: Se k non è finito

    Example:
        >>> params_from_k(0.0)
        GlsParams(k=0.0, a=10.0, b=28.0, c=-2.6666666666666665, d=-1.0)
    """
    k = validate_finite(k, "k")
    return GlsParams(
        k=k,
        a=10.0 + (25.0 / 29.0) * k,
        b=28.0 - (35.0 / 29.0) * k,
        c=-(8.0 / 3.0) - (1.0 / 87.0) * k,
        d=k - 1.0,
    )


def master_deriv(p: GlsParams, x: StateVec) -> StateVec:
    """Campo vettoriale del master libero."""
    x1, x2, x3 = x
    return StateVec(
        p.a * (x2 - x1),
        p.b * x1 + p.d * x2 - x1 * x3,
        x1 * x2 + p.c * x3,
    )


def error_vec(sigma: SigmaVec, x: StateVec, y: StateVec) -> ErrorVec:
    """
    Errore generalizzato E_i = y_i + sigma_i x_i, più e3 = y3 - x3.
    """
    return ErrorVec(
        y[0] + sigma[0] * x[0],
        y[1] + sigma[1] * x[1],
        y[2] + sigma[2] * x[2],
        y[2] - x[2],
    )


def control_inputs(
    p: GlsParams,
    sigma: SigmaVec,
    x: StateVec,
    E: ErrorVec,
    disabled: FrozenSet[str] = _NO_TERMS,
) -> ControlVec:
    """
    Legge di controllo non lineare composta dai nove sotto-termini.

    u1 = u_a1 - u_b1 + u_c1
    u2 = u_a2 + u_b2 + u_c2
    u3 = -u_a3 - u_b3

    Args:
        p: Coefficienti del sistema
        sigma: Parametri di controllo
        x: Stato del master (o canale trasmesso)
        E: Errore generalizzato
        disabled: Sotto-termini da azzerare per ablazione diagnostica
                  (nomi in app.models.gls.CONTROL_TERMS)

    Returns:
        ControlVec: Ingressi (u1, u2, u3)

    Note:
        - u_c2 contiene il prodotto E3 E1 così come scritto nella legge
          originale; si può disattivare con disabled={"u_c2"}
    """
    s1, s2, s3 = sigma
    x1, x2, x3 = x
    E1, E2, E3 = E[0], E[1], E[2]

    u_a1 = (s2 - s1) * p.a * x2
    u_b1 = (p.b + s3 * x3) * E2
    u_c1 = s2 * x2 * E3
    u_a2 = (s1 - s2) * p.b * x1
    u_b2 = (s1 * s3 + s2) * x1 * x3
    u_c2 = E3 * E1 - p.a * E1 - 2.0 * p.c * E2
    u_a3 = (s1 * s2 + s3) * x1 * x2
    u_b3 = E1 * E2

    if disabled:
        unknown = disabled.difference(CONTROL_TERMS)
        if unknown:
            raise InvalidInputError(
                message="Sotto-termini di controllo sconosciuti",
                details={"unknown": sorted(unknown), "allowed": list(CONTROL_TERMS)}
            )
        terms = dict(zip(CONTROL_TERMS, (u_a1, u_b1, u_c1, u_a2, u_b2, u_c2, u_a3, u_b3)))
        for name in disabled:
            terms[name] = 0.0
        u_a1, u_b1, u_c1, u_a2, u_b2, u_c2, u_a3, u_b3 = (terms[name] for name in CONTROL_TERMS)

    return ControlVec(
        u_a1 - u_b1 + u_c1,
        u_a2 + u_b2 + u_c2,
        -u_a3 - u_b3,
    )


def slave_deriv(
    p: GlsParams,
    sigma: SigmaVec,
    x: StateVec,
    y: StateVec,
    disabled: FrozenSet[str] = _NO_TERMS,
) -> StateVec:
    """
    Campo vettoriale dello slave controllato.

    I controlli sono calcolati da control_inputs(p, sigma, x, error_vec(sigma, x, y)).
    """
    u = control_inputs(p, sigma, x, error_vec(sigma, x, y), disabled)
    y1, y2, y3 = y
    return StateVec(
        p.a * (y2 - y1) + u[0],
        p.b * y1 + p.d * y2 - y1 * y3 + u[1],
        y1 * y2 + p.c * y3 + u[2],
    )


def error_deriv_closed_form(p: GlsParams, sigma: SigmaVec, x: StateVec, E: ErrorVec) -> ErrorVec:
    """
    Dinamica dell'errore in forma chiusa, ottenuta sostituendo i controlli.

    E1' = -a E1 + (a - b - s3 x3) E2 + s2 x2 E3
    E2' = (b - a + s3 x3) E1 + (d - 2c) E2 + s1 x1 E3
    E3' = -s2 x2 E1 - s1 x1 E2 + c E3
    """
    s1, s2, s3 = sigma
    x1, x2, x3 = x
    E1, E2, E3 = E[0], E[1], E[2]
    return ErrorVec(
        -p.a * E1 + (p.a - p.b - s3 * x3) * E2 + s2 * x2 * E3,
        (p.b - p.a + s3 * x3) * E1 + (p.d - 2.0 * p.c) * E2 + s1 * x1 * E3,
        -s2 * x2 * E1 - s1 * x1 * E2 + p.c * E3,
    )


def lyapunov_value(E: ErrorVec) -> float:
    """V = (E1^2 + E2^2 + E3^2) / 2."""
    return 0.5 * (E[0] * E[0] + E[1] * E[1] + E[2] * E[2])


def q_matrix(p: GlsParams, sigma: SigmaVec, x: StateVec, form: QForm = "error_dynamics") -> QMatrix:
    """
    Costruisce la matrice Q tale che V' = -E^T Q E.

    Args:
        p: Coefficienti del sistema
        sigma: Parametri di controllo
        x: Stato del master
        form: "error_dynamics" usa il coefficiente incrociato E2E1 della
              dinamica dell'errore (b - a + s3 x3), per cui E . E' = -E^T Q E
              vale esattamente; "printed" riproduce la matrice pubblicata,
              con Q(1,2) = -(b - a - s3 x3) e quindi Q(1,2) + Q(2,1) = 2 s3 x3

    Returns:
        QMatrix: Matrice 3x3 con la forma usata

    Note:
        - Le due forme coincidono per s3 x3 = 0
        - In entrambe Q(1,3) + Q(3,1) = 0 e Q(2,3) + Q(3,2) = 0
    """
    s1, s2, s3 = sigma
    x1, x2, x3 = x
    if form == "error_dynamics":
        q12 = -(p.b - p.a + s3 * x3)
    elif form == "printed":
        q12 = -(p.b - p.a - s3 * x3)
    else:
        raise InvalidInputError(
            message="Forma di Q sconosciuta",
            details={"form": form, "allowed": ["error_dynamics", "printed"]}
        )
    values = np.array([
        [p.a, q12, s2 * x2],
        [p.b - p.a + s3 * x3, 2.0 * p.c - p.d, s1 * x1],
        [-s2 * x2, -s1 * x1, -p.c],
    ])
    return QMatrix(values=values, form=form)
