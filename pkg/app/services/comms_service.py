"""
Service Layer per la comunicazione a mascheramento caotico.

Pipeline:
1. Messaggi sinusoidali m_i(t) = offset + b sin(2 pi f_i t)
2. Codifica: i canali trasmessi x~ = x + m alimentano il controllore
   dello slave (mask), oppure m_i entra nella derivata del master (drive)
3. Decodifica: residuo r(t) = y3 + sigma3 * x~3 dopo il transitorio
4. Spettro del residuo, passa-banda attorno a ogni messaggio, fit sinusoidale

Il sistema accoppiato commuta con (x1, x2, x3) -> (-x1, -x2, x3) se m1 e m2
cambiano segno: il loro contributo a y3 ha media nulla sull'attrattore
simmetrico e arriva come rumore a banda larga. Come linea coerente nel
residuo compare solo m3.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import FitFailedError, InvalidInputError
from app.models.trajectory import Trajectory
from app.schemas.comms import CommsConfig, CommsOptions, MessageSpec
from app.schemas.reports import MessageFit, PeakMatch
from app.schemas.simulation import SimConfig
from app.services.gls_core import params_from_k
from app.services.integrator import (
    coupled_field,
    coupled_trajectory,
    discard_transient,
    integrate_master,
    integrate_samples,
)
from app.services.spectral import (
    Spectrum,
    band_pass,
    fit_sine,
    identify_peaks,
    line_outliers,
    power_spectrum,
    welch_spectrum,
)
from app.utils.logger import get_logger

logger = get_logger(__name__)


# --- CASI E REGIMI ---

# Terne di frequenze (f1, f2, f3) dei quattro casi
CASE_FREQUENCIES: Dict[int, Tuple[float, float, float]] = {
    1: (1.000, 1.088, 1.250),
    2: (1.68, 2.05, 3.50),
    3: (1.000, 1.088, 2.50),
    4: (1.0, 1.2, 1.3),
}

# Regime di pendenza -> sigma, per preset
REGIME_SIGMAS: Dict[str, Dict[str, Tuple[float, float, float]]] = {
    "figure": {
        "positive": (1.0, 1.0, -1.0),
        "zero": (1.0, 1.0, 0.0),
        "negative": (1.0, 1.0, 1.0),
    },
    "literal": {
        "positive": (0.0, 0.0, 0.0),
        "zero": (0.4, 0.4, 0.4),
        "negative": (1.0, 1.0, 1.0),
    },
}

# Ampiezza dello scenario a segnale debole
WEAK_SIGNAL_AMPLITUDE = 0.003

# Sotto questa frequenza il residuo è deriva lenta: nessuna ricerca di linee
LINE_SEARCH_MIN_FREQ = 0.5


@dataclass(frozen=True)
class DecodedResult:
    """
    Risultato della decodifica di un run di comunicazione.

    Attributes:
        t: Istanti della finestra di analisi
        residual: Residuo y3 + sigma3 * x~3
        spectrum: Spettro di potenza del residuo
        peaks: Picco più vicino per ogni frequenza codificata
        fits: Sinusoide recuperata per ogni messaggio
        bands: Banda passante usata per ogni messaggio
    """
    t: np.ndarray
    residual: np.ndarray
    spectrum: Spectrum
    peaks: List[PeakMatch]
    fits: List[MessageFit]
    bands: List[Tuple[float, float]]


# --- MESSAGGI ---

def message_sample(spec: MessageSpec, t: float) -> float:
    """
    Valore del messaggio all'istante t: offset + b sin(2 pi f t).

    Raises:
        InvalidInputError: Se t < 0

    Example:
        >>> message_sample(MessageSpec(amplitude=0.01, freq=1.0), 0.25)
        0.01
    """
    if t < 0:
        raise InvalidInputError(message="t deve essere >= 0", details={"t": t})
    return spec.offset + spec.amplitude * math.sin(2.0 * math.pi * spec.freq * t)


def message_series(spec: MessageSpec, t: np.ndarray) -> np.ndarray:
    """Versione vettoriale di message_sample sulla griglia t."""
    return spec.offset + spec.amplitude * np.sin(2.0 * np.pi * spec.freq * np.asarray(t, dtype=float))


def _message_forcing(messages: Sequence[MessageSpec]):
    def forcing(t: float) -> Tuple[float, float, float]:
        return (
            message_sample(messages[0], t),
            message_sample(messages[1], t),
            message_sample(messages[2], t),
        )
    return forcing


# --- CODIFICA / DECODIFICA ---

def encode_and_run(config: CommsConfig) -> Trajectory:
    """
    Integra master e slave con i messaggi iniettati.

    - mask: il master evolve indisturbato; lo slave consuma x~ = x + m(t)
    - drive: m_i(t) si somma alla derivata i-esima del master; lo slave
      consuma il master stesso

    Args:
        config: Configurazione del run di comunicazione

    Returns:
        Trajectory: x, y, E = y + sigma * x e i canali trasmessi

    Raises:
        IntegrationDivergedError: Propagata

    Note:
        - Con ampiezze e offset nulli il risultato coincide bit a bit con
          integrate_coupled
    """
    sim = config.sim
    p = params_from_k(sim.k)
    forcing = _message_forcing(config.messages)

    if config.injection == "mask":
        field = coupled_field(p, sim.sigma_vec, sim.disabled, transmitted_offset=forcing)
    else:
        field = coupled_field(p, sim.sigma_vec, sim.disabled, master_forcing=forcing)

    samples = integrate_samples(field, sim.x0 + sim.y0, sim.h, sim.n_steps, time_dependent=True)
    traj = coupled_trajectory(samples, sim.sigma_vec, sim.h)

    if config.injection == "mask":
        offsets = np.column_stack([message_series(spec, traj.t) for spec in config.messages])
        transmitted = traj.x + offsets
    else:
        transmitted = traj.x
    logger.debug(
        "Run di comunicazione integrato",
        extra={"injection": config.injection, "frequencies": config.frequencies}
    )
    return Trajectory(
        t=traj.t, x=traj.x, h=traj.h, y=traj.y, E=traj.E, transmitted=transmitted,
    )


def decode_residual(traj: Trajectory, sigma3: float) -> np.ndarray:
    """
    Residuo decodificato r(t) = y3 + sigma3 * x~3.

    Per sigma3 = -1 (sincronizzazione) è y3 - x~3.

    Args:
        traj: Finestra dopo il transitorio (con canali trasmessi, se presenti)
        sigma3: Terza componente di sigma

    Raises:
        InvalidInputError: Finestra vuota o traiettoria non accoppiata
    """
    if len(traj) == 0 or not traj.is_coupled:
        raise InvalidInputError(message="Serve una finestra accoppiata non vuota")
    channel = traj.x if traj.transmitted is None else traj.transmitted
    return traj.y[:, 2] + sigma3 * channel[:, 2]


def resonance_frequency(config: SimConfig, n_steps: Optional[int] = None) -> Tuple[float, Spectrum]:
    """
    Frequenza di risonanza f_r: picco dominante dello spettro di x3 del
    master libero dopo il transitorio.

    Returns:
        (f_r, spectrum)
    """
    traj = discard_transient(integrate_master(config, n_steps=n_steps), config.transient_steps)
    spectrum = power_spectrum(traj.x[:, 2], traj.sample_rate)
    return spectrum.peak_frequency(), spectrum


def residual_lines(residual: np.ndarray, sample_rate: float, factor: float = 10.0) -> np.ndarray:
    """
    Linee spettrali del residuo: bin dello spettro di Welch oltre factor
    volte la mediana locale, sopra LINE_SEARCH_MIN_FREQ.

    Senza messaggi, dopo la convergenza, il risultato è vuoto.

    Args:
        residual: Residuo decodificato
        sample_rate: Campioni per unità di tempo
        factor: Soglia rispetto alla mediana locale

    Returns:
        Frequenze segnalate, in ordine crescente
    """
    spectrum = welch_spectrum(residual, sample_rate)
    return line_outliers(spectrum, factor=factor, f_min=LINE_SEARCH_MIN_FREQ)


def decode(config: CommsConfig, traj: Trajectory, transient_steps: int) -> DecodedResult:
    """
    Decodifica completa: residuo, spettro, picchi e fit per messaggio.

    Un fit che non converge viene registrato con parametri NaN.
    """
    window = discard_transient(traj, transient_steps)
    residual = decode_residual(window, config.sim.sigma[2])
    spectrum = power_spectrum(residual, window.sample_rate)
    peaks = identify_peaks(spectrum, config.frequencies)

    fits = []
    bands = []
    for index, spec in enumerate(config.messages):
        f_lo, f_hi = config.band_for(index, spectrum.bin_width)
        bands.append((f_lo, f_hi))
        recovered = band_pass(residual, window.sample_rate, f_lo, f_hi)
        try:
            fit = fit_sine(recovered, window.sample_rate, spec.freq, t0=float(window.t[0]))
            fits.append(MessageFit(
                message_index=index + 1,
                freq=fit.freq,
                amplitude=fit.amplitude,
                phase=fit.phase,
                offset=fit.offset,
                adj_r2=fit.adj_r2,
            ))
        except FitFailedError as exc:
            logger.warning(
                "Fit del messaggio non riuscito",
                extra={"message_index": index + 1, "details": exc.details}
            )
            nan = math.nan
            fits.append(MessageFit(
                message_index=index + 1, freq=nan, amplitude=nan, phase=nan, offset=nan, adj_r2=nan,
            ))

    return DecodedResult(
        t=window.t, residual=residual, spectrum=spectrum, peaks=peaks, fits=fits, bands=bands,
    )


def build_case_config(
    case_id: int,
    regime: str,
    sim: SimConfig,
    options: CommsOptions,
    preset: str = "figure",
    amplitude: Optional[float] = None,
) -> CommsConfig:
    """
    Costruisce la CommsConfig di un caso (frequenze) in un regime (sigma).

    Args:
        case_id: Caso 1..4
        regime: positive | zero | negative
        sim: Configurazione di base (sigma e n_steps vengono sostituiti)
        options: Sezione [comms]
        preset: figure | literal per la mappa regime -> sigma
        amplitude: Override dell'ampiezza dei messaggi

    Raises:
        InvalidInputError: Caso, regime o preset sconosciuti
    """
    if case_id not in CASE_FREQUENCIES:
        raise InvalidInputError(
            message="Caso sconosciuto",
            details={"case": case_id, "allowed": sorted(CASE_FREQUENCIES)}
        )
    if preset not in REGIME_SIGMAS or regime not in REGIME_SIGMAS[preset]:
        raise InvalidInputError(
            message="Regime o preset sconosciuto",
            details={"regime": regime, "preset": preset}
        )

    b = options.amplitude if amplitude is None else amplitude
    run = sim.model_copy(update={
        "sigma": REGIME_SIGMAS[preset][regime],
        "n_steps": options.n_steps,
        "transient_steps": options.transient_steps,
    })
    messages = tuple(
        MessageSpec(offset=options.offset, amplitude=b, freq=freq)
        for freq in CASE_FREQUENCIES[case_id]
    )
    return CommsConfig(
        sim=run,
        messages=messages,
        injection=options.injection,
        band_half_bins=options.band_half_bins,
    )


class CommsService:
    """
    Service che esegue la pipeline completa di un caso di comunicazione.

    Responsabilità:
    - Costruire la configurazione del caso dal regime scelto
    - Codificare, integrare e decodificare
    """

    def run_case(
        self,
        case_id: int,
        regime: str,
        sim: SimConfig,
        options: CommsOptions,
        preset: str = "figure",
    ) -> Tuple[CommsConfig, DecodedResult]:
        """
        Esegue il caso case_id nel regime indicato.

        Returns:
            (config, decoded): configurazione usata e risultato decodificato

        Raises:
            InvalidInputError: Caso o regime sconosciuti
            IntegrationDivergedError: Propagata
        """
        config = build_case_config(case_id, regime, sim, options, preset)
        traj = encode_and_run(config)
        decoded = decode(config, traj, config.sim.transient_steps)
        logger.info(
            "Caso di comunicazione decodificato",
            extra={
                "case": case_id,
                "regime": regime,
                "peaks_found": sum(match.within_tolerance for match in decoded.peaks),
            }
        )
        return config, decoded
