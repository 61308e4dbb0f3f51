"""
Service Layer per l'integrazione numerica a passo fisso (RK4 classico).

Contiene l'integrazione del master libero e del sistema accoppiato
master/slave, lo scarto del transitorio e la stima dei bound M, N, P.

Note:
    - Nessun passo adattivo: stessa configurazione, stessi bit in uscita
    - La griglia temporale è costruita come indice * h, mai accumulata
    - Lo stato viaggia come tupla di float nel loop e viene copiato in un
      array numpy preallocato a ogni campione
"""
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from app.core.config import DIVERGENCE_LIMIT
from app.core.exceptions import IntegrationDivergedError, InvalidInputError
from app.models.gls import GlsParams, SigmaVec, StateVec
from app.models.trajectory import Bounds, Trajectory
from app.schemas.simulation import SimConfig
from app.services.gls_core import master_deriv, params_from_k, slave_deriv
from app.utils.logger import get_logger
from app.utils.validators import validate_positive

logger = get_logger(__name__)

State = Tuple[float, ...]
Field = Callable[..., Sequence[float]]

# Forzante additiva dipendente dal tempo: t -> (m1, m2, m3)
Forcing = Callable[[float], Tuple[float, float, float]]


# --- PASSO RK4 ---

def rk4_step(
    field: Field,
    state: Sequence[float],
    h: float,
    *,
    t: Optional[float] = None,
    step_index: int = 0,
) -> State:
    """
    Esegue un passo di Runge-Kutta del quarto ordine.

    Args:
        field: Campo vettoriale. Autonomo (field(state)) se t è None,
               altrimenti non autonomo (field(t, state))
        state: Stato corrente
        h: Passo (> 0)
        t: Istante corrente per campi non autonomi
        step_index: Indice del passo, riportato nell'errore di divergenza

    Returns:
        State: Stato al passo successivo (pesi 1/6, 2/6, 2/6, 1/6)

    Raises:
        InvalidInputError: Se h <= 0
        IntegrationDivergedError: Se il nuovo stato contiene NaN o infiniti

    Example:
        >>> rk4_step(lambda s: (-s[0],), (1.0,), 0.05)
        (0.951229424...,)
    """
    if not h > 0:
        validate_positive(h, "h")

    if t is None:
        k1 = field(state)
        k2 = field(tuple(s + 0.5 * h * d for s, d in zip(state, k1)))
        k3 = field(tuple(s + 0.5 * h * d for s, d in zip(state, k2)))
        k4 = field(tuple(s + h * d for s, d in zip(state, k3)))
    else:
        half = t + 0.5 * h
        k1 = field(t, state)
        k2 = field(half, tuple(s + 0.5 * h * d for s, d in zip(state, k1)))
        k3 = field(half, tuple(s + 0.5 * h * d for s, d in zip(state, k2)))
        k4 = field(t + h, tuple(s + h * d for s, d in zip(state, k3)))

    new_state = tuple(
        s + (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        for s, d1, d2, d3, d4 in zip(state, k1, k2, k3, k4)
    )
    if not all(math.isfinite(v) for v in new_state):
        raise IntegrationDivergedError(
            message="Stato non finito dopo il passo RK4",
            step_index=step_index,
            details={"state": [repr(v) for v in new_state]}
        )
    return new_state


def time_grid(n_samples: int, h: float, start_index: int = 0) -> np.ndarray:
    """Griglia t[i] = (start_index + i) * h."""
    return np.arange(start_index, start_index + n_samples, dtype=float) * h


def integrate_samples(
    field: Field,
    state0: Sequence[float],
    h: float,
    n_steps: int,
    *,
    time_dependent: bool = False,
    divergence_limit: Optional[float] = None,
) -> np.ndarray:
    """
    Loop di integrazione condiviso da tutti i run.

    Returns:
        np.ndarray: Stati campionati, shape (n_steps + 1, dim)

    Raises:
        IntegrationDivergedError: Stato non finito o |componente| oltre la sentinella
    """
    limit = DIVERGENCE_LIMIT if divergence_limit is None else divergence_limit
    state = tuple(float(v) for v in state0)
    samples = np.empty((n_steps + 1, len(state)), dtype=float)
    samples[0] = state

    for step in range(1, n_steps + 1):
        t = (step - 1) * h if time_dependent else None
        state = rk4_step(field, state, h, t=t, step_index=step)
        if max(abs(v) for v in state) > limit:
            raise IntegrationDivergedError(
                message="Superata la sentinella di divergenza",
                step_index=step,
                details={"limit": limit, "state": [repr(v) for v in state]}
            )
        samples[step] = state

    return samples


# --- CAMPI DEL SISTEMA ---

def coupled_field(
    p: GlsParams,
    sigma: SigmaVec,
    disabled: frozenset = frozenset(),
    *,
    transmitted_offset: Optional[Forcing] = None,
    master_forcing: Optional[Forcing] = None,
) -> Field:
    """
    Costruisce il campo a sei componenti (x, y) del sistema accoppiato.

    Args:
        p: Coefficienti del sistema
        sigma: Parametri di controllo
        disabled: Sotto-termini di controllo disattivati
        transmitted_offset: Se presente, lo slave vede x~ = x + m(t)
        master_forcing: Se presente, m(t) si somma alla derivata del master

    Returns:
        Field: field(state) senza forzanti, field(t, state) con almeno una forzante
    """
    if transmitted_offset is None and master_forcing is None:
        def autonomous(state: Sequence[float]) -> State:
            x = StateVec(state[0], state[1], state[2])
            y = StateVec(state[3], state[4], state[5])
            return master_deriv(p, x) + slave_deriv(p, sigma, x, y, disabled)
        return autonomous

    def forced(t: float, state: Sequence[float]) -> State:
        x = StateVec(state[0], state[1], state[2])
        y = StateVec(state[3], state[4], state[5])
        dx = master_deriv(p, x)
        if master_forcing is not None:
            m = master_forcing(t)
            dx = StateVec(dx[0] + m[0], dx[1] + m[1], dx[2] + m[2])
        seen = x
        if transmitted_offset is not None:
            m = transmitted_offset(t)
            seen = StateVec(x[0] + m[0], x[1] + m[1], x[2] + m[2])
        return dx + slave_deriv(p, sigma, seen, y, disabled)
    return forced


def coupled_trajectory(samples: np.ndarray, sigma: SigmaVec, h: float) -> Trajectory:
    """Impacchetta gli stati (x, y) in una Trajectory con E = y + sigma * x."""
    x = samples[:, :3]
    y = samples[:, 3:]
    E = y + np.asarray(sigma, dtype=float) * x
    return Trajectory(t=time_grid(len(samples), h), x=x, h=h, y=y, E=E)


# --- OPERAZIONI ---

def integrate_master(config: SimConfig, n_steps: Optional[int] = None) -> Trajectory:
    """
    Integra il master libero a partire da config.x0.

    Args:
        config: Configurazione del run (h, k, x0)
        n_steps: Override del numero di passi (es. run lungo per i bound)

    Returns:
        Trajectory: Traiettoria del solo master, n_steps + 1 campioni

    Raises:
        IntegrationDivergedError: Con indice del passo

    Example:
        >>> traj = integrate_master(SimConfig(n_steps=100))
        >>> len(traj)
        101
    """
    steps = config.n_steps if n_steps is None else n_steps
    p = params_from_k(config.k)

    def field(state: Sequence[float]) -> StateVec:
        return master_deriv(p, StateVec(state[0], state[1], state[2]))

    samples = integrate_samples(field, config.x0, config.h, steps)
    logger.debug(
        "Master integrato",
        extra={"k": config.k, "h": config.h, "n_steps": steps}
    )
    return Trajectory(t=time_grid(len(samples), config.h), x=samples, h=config.h)


def integrate_coupled(config: SimConfig) -> Trajectory:
    """
    Integra master e slave controllato sullo stesso orologio.

    L'errore E = y + sigma * x viene registrato a ogni campione.

    Args:
        config: Configurazione del run

    Returns:
        Trajectory: Traiettoria con x, y, E (n_steps + 1 campioni)

    Raises:
        IntegrationDivergedError: Con indice del passo
    """
    p = params_from_k(config.k)
    field = coupled_field(p, config.sigma_vec, config.disabled)
    samples = integrate_samples(field, config.x0 + config.y0, config.h, config.n_steps)
    logger.debug(
        "Sistema accoppiato integrato",
        extra={"k": config.k, "sigma": config.sigma, "n_steps": config.n_steps}
    )
    return coupled_trajectory(samples, config.sigma_vec, config.h)


def discard_transient(traj: Trajectory, transient_steps: int) -> Trajectory:
    """
    Scarta i primi transient_steps campioni.

    Args:
        traj: Traiettoria completa
        transient_steps: Campioni da scartare (0 <= transient_steps < len(traj))

    Returns:
        Trajectory: Vista sul suffisso (nessuna copia)

    Raises:
        InvalidInputError: Se l'indice è fuori range
    """
    if not 0 <= transient_steps < len(traj):
        raise InvalidInputError(
            message="transient_steps fuori range",
            details={"transient_steps": transient_steps, "length": len(traj)}
        )
    if transient_steps == 0:
        return traj
    return traj.suffix(transient_steps)


def estimate_bounds(traj: Trajectory) -> Bounds:
    """
    Stima M = max|x1|, N = max|x2|, P = max|x3| sulla finestra.

    Raises:
        InvalidInputError: Se la finestra è vuota
    """
    if len(traj) == 0:
        raise InvalidInputError(message="Finestra vuota: impossibile stimare i bound")
    peaks = np.max(np.abs(traj.x), axis=0)
    return Bounds(M=float(peaks[0]), N=float(peaks[1]), P=float(peaks[2]))
