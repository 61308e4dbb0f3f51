"""
Service Layer per l'elaborazione spettrale dei segnali.

Contiene lo spettro di potenza con finestra di Hann (singolo o mediato alla
Welch), il filtro passa-banda a maschera in frequenza (fase nulla), la
ricerca dei picchi e delle linee spettrali e il fit sinusoidale con R^2
aggiustato.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy import ndimage, optimize, signal

from app.core.config import FIT_MAX_NFEV
from app.core.exceptions import DegenerateInputError, FitFailedError, InvalidInputError
from app.schemas.reports import PeakMatch
from app.utils.validators import validate_band, validate_positive, validate_series

MIN_SPECTRUM_SAMPLES = 16


@dataclass(frozen=True)
class Spectrum:
    """
    Spettro di potenza unilatero senza il bin DC.

    Attributes:
        freq: Frequenze dei bin, in (0, Nyquist]
        power: |X(f)|^2 della serie finestrata (densità per Welch)
        sample_rate: Campioni per unità di tempo
        n_samples: Lunghezza della trasformata (serie intera o segmento Welch)
    """
    freq: np.ndarray
    power: np.ndarray
    sample_rate: float
    n_samples: int

    @property
    def bin_width(self) -> float:
        return self.sample_rate / self.n_samples

    def peak_frequency(self) -> float:
        """Frequenza del bin di potenza massima."""
        return float(self.freq[int(np.argmax(self.power))])

    def rows(self):
        return zip(self.freq, self.power)


@dataclass(frozen=True)
class SineFit:
    """Parametri di A sin(2 pi f t + phi) + c e R^2 aggiustato."""
    amplitude: float
    freq: float
    phase: float
    offset: float
    adj_r2: float


def power_spectrum(series: Sequence[float], sample_rate: float) -> Spectrum:
    """
    Spettro di potenza della serie a media nulla, finestrata con Hann.

    Args:
        series: Serie campionata uniformemente (>= 16 campioni)
        sample_rate: Campioni per unità di tempo

    Returns:
        Spectrum: Frequenze in cicli per unità di tempo, DC escluso

    Raises:
        DegenerateInputError: Serie troppo corta
    """
    values = validate_series(series, MIN_SPECTRUM_SAMPLES)
    sample_rate = validate_positive(sample_rate, "sample_rate")
    n = values.size

    window = signal.get_window("hann", n)
    transform = np.fft.rfft((values - values.mean()) * window)
    freq = np.fft.rfftfreq(n, d=1.0 / sample_rate)
    return Spectrum(
        freq=freq[1:],
        power=np.abs(transform[1:]) ** 2,
        sample_rate=sample_rate,
        n_samples=n,
    )


def welch_spectrum(series: Sequence[float], sample_rate: float, segment_length: int = 1024) -> Spectrum:
    """
    Densità spettrale mediata su segmenti di Hann sovrapposti al 50%,
    ciascuno privato del trend lineare.

    Args:
        series: Serie campionata uniformemente (>= 16 campioni)
        sample_rate: Campioni per unità di tempo
        segment_length: Lunghezza dei segmenti (ridotta alla serie se più lunga)

    Returns:
        Spectrum: DC escluso, bin_width = sample_rate / segmento
    """
    values = validate_series(series, MIN_SPECTRUM_SAMPLES)
    sample_rate = validate_positive(sample_rate, "sample_rate")
    nperseg = min(int(segment_length), values.size)
    if nperseg < MIN_SPECTRUM_SAMPLES:
        raise InvalidInputError(
            message="Segmento troppo corto",
            details={"segment_length": segment_length, "min": MIN_SPECTRUM_SAMPLES}
        )

    freq, power = signal.welch(values, fs=sample_rate, window="hann", nperseg=nperseg, detrend="linear")
    return Spectrum(freq=freq[1:], power=power[1:], sample_rate=sample_rate, n_samples=nperseg)


def line_outliers(
    spectrum: Spectrum,
    factor: float = 10.0,
    half_window: int = 10,
    f_min: float = 0.0,
) -> np.ndarray:
    """
    Frequenze dei bin che superano factor volte la mediana locale.

    La mediana è calcolata su 2 * half_window + 1 bin centrati sul bin
    stesso: un fondo colorato ma liscio non produce linee, una sinusoide sì.

    Args:
        spectrum: Spettro (tipicamente welch_spectrum)
        factor: Soglia rispetto alla mediana locale
        half_window: Semi-ampiezza della finestra della mediana, in bin
        f_min: Frequenze sotto f_min non vengono esaminate

    Returns:
        Array (eventualmente vuoto) delle frequenze segnalate

    Example:
        >>> np.isclose(line_outliers(welch_spectrum(noise + tone, 20.0)), 2.5).any()
        True
    """
    factor = validate_positive(factor, "factor")
    if half_window < 1:
        raise InvalidInputError(message="half_window deve essere >= 1", details={"half_window": half_window})
    local = ndimage.median_filter(spectrum.power, size=2 * half_window + 1, mode="nearest")
    flagged = (spectrum.power > factor * local) & (spectrum.freq >= f_min)
    return spectrum.freq[flagged]


def band_pass(series: Sequence[float], sample_rate: float, f_lo: float, f_hi: float) -> np.ndarray:
    """
    Filtro passa-banda a muro: conserva i bin in [f_lo, f_hi] e antitrasforma.

    Raises:
        InvalidInputError: Se non vale 0 < f_lo < f_hi < Nyquist

    Note:
        - Fase nulla per costruzione; applicarlo due volte equivale a una
    """
    values = validate_series(series, 2)
    sample_rate = validate_positive(sample_rate, "sample_rate")
    validate_band(f_lo, f_hi, 0.5 * sample_rate)

    n = values.size
    transform = np.fft.rfft(values)
    freq = np.fft.rfftfreq(n, d=1.0 / sample_rate)
    mask = (freq >= f_lo) & (freq <= f_hi)
    return np.fft.irfft(transform * mask, n=n)


def band_power(spectrum: Spectrum, f_lo: float, f_hi: float) -> float:
    """Potenza integrata dei bin in [f_lo, f_hi]."""
    inside = (spectrum.freq >= f_lo) & (spectrum.freq <= f_hi)
    return float(spectrum.power[inside].sum())


def nearest_peak(spectrum: Spectrum, freq: float) -> int:
    """
    Indice del massimo locale più vicino a freq (argmax se non ce ne sono).
    """
    peaks, _ = signal.find_peaks(spectrum.power)
    if peaks.size == 0:
        return int(np.argmax(spectrum.power))
    return int(peaks[np.argmin(np.abs(spectrum.freq[peaks] - freq))])


def identify_peaks(spectrum: Spectrum, targets: Sequence[float], tolerance_bins: float = 1.0) -> List[PeakMatch]:
    """
    Per ogni frequenza codificata, il massimo locale più vicino dello spettro.

    Args:
        spectrum: Spettro del residuo
        targets: Frequenze codificate
        tolerance_bins: Distanza massima in bin per considerare il picco trovato

    Returns:
        Lista di PeakMatch nello stesso ordine di targets
    """
    matches = []
    for target in targets:
        index = nearest_peak(spectrum, target)
        found = float(spectrum.freq[index])
        distance = abs(found - target) / spectrum.bin_width
        matches.append(PeakMatch(
            target=float(target),
            freq=found,
            distance_bins=distance,
            within_tolerance=bool(distance <= tolerance_bins),
        ))
    return matches


def _refine_peak(spectrum: Spectrum, index: int) -> float:
    """Interpolazione parabolica della log-potenza attorno al bin index."""
    if index <= 0 or index >= spectrum.power.size - 1:
        return float(spectrum.freq[index])
    left, centre, right = np.log(spectrum.power[index - 1:index + 2] + np.finfo(float).tiny)
    denominator = left - 2.0 * centre + right
    if denominator >= 0:
        return float(spectrum.freq[index])
    shift = 0.5 * (left - right) / denominator
    return float(spectrum.freq[index] + shift * spectrum.bin_width)


def _sine(t: np.ndarray, amplitude: float, freq: float, phase: float, offset: float) -> np.ndarray:
    return amplitude * np.sin(2.0 * np.pi * freq * t + phase) + offset


def fit_sine(
    series: Sequence[float],
    sample_rate: float,
    freq_hint: float,
    *,
    t0: float = 0.0,
    max_nfev: Optional[int] = None,
) -> SineFit:
    """
    Fit ai minimi quadrati non lineari di A sin(2 pi f t + phi) + c.

    Processo:
    1. Seed della frequenza dal massimo locale dello spettro più vicino
       a freq_hint, raffinato per interpolazione parabolica
    2. Seed di ampiezza, fase e offset per minimi quadrati lineari
    3. Levenberg-Marquardt su tutti e quattro i parametri

    Args:
        series: Serie da fittare
        sample_rate: Campioni per unità di tempo
        freq_hint: Frequenza attesa (almeno 4 campioni per periodo)
        t0: Istante del primo campione (la fase è riferita a t = 0)
        max_nfev: Limite di valutazioni (default GLS_FIT_MAX_NFEV)

    Returns:
        SineFit: ampiezza >= 0, fase in (-pi, pi], R^2 aggiustato con n - 4 gdl

    Raises:
        InvalidInputError: Meno di 4 campioni per periodo del suggerimento
        DegenerateInputError: Serie costante o troppo corta
        FitFailedError: L'ottimizzatore non converge entro max_nfev

    Example:
        >>> fit = fit_sine(samples, 20.0, 1.25)
        >>> fit.adj_r2 > 0.999
        True
    """
    values = validate_series(series, MIN_SPECTRUM_SAMPLES)
    sample_rate = validate_positive(sample_rate, "sample_rate")
    freq_hint = validate_positive(freq_hint, "freq_hint")
    if sample_rate / freq_hint < 4.0:
        raise InvalidInputError(
            message="Servono almeno 4 campioni per periodo",
            details={"sample_rate": sample_rate, "freq_hint": freq_hint}
        )

    n = values.size
    t = t0 + np.arange(n, dtype=float) / sample_rate
    ss_tot = float(np.sum((values - values.mean()) ** 2))
    if ss_tot == 0:
        raise DegenerateInputError(message="Serie costante: fit non definito", details={"n_samples": n})

    spectrum = power_spectrum(values, sample_rate)
    f0 = _refine_peak(spectrum, nearest_peak(spectrum, freq_hint))

    design = np.column_stack([
        np.sin(2.0 * np.pi * f0 * t),
        np.cos(2.0 * np.pi * f0 * t),
        np.ones(n),
    ])
    (s_coef, c_coef, c0), *_ = np.linalg.lstsq(design, values, rcond=None)
    seed = [math.hypot(s_coef, c_coef), f0, math.atan2(c_coef, s_coef), c0]

    try:
        params, _ = optimize.curve_fit(
            _sine, t, values, p0=seed,
            maxfev=FIT_MAX_NFEV if max_nfev is None else max_nfev,
        )
    except (RuntimeError, optimize.OptimizeWarning) as exc:
        raise FitFailedError(
            message="Il fit sinusoidale non converge",
            details={"seed": [float(v) for v in seed], "reason": str(exc)}
        ) from exc

    amplitude, freq, phase, offset = (float(v) for v in params)
    if not all(math.isfinite(v) for v in (amplitude, freq, phase, offset)):
        raise FitFailedError(message="Parametri del fit non finiti", details={"seed": [float(v) for v in seed]})
    if amplitude < 0:
        amplitude = -amplitude
        phase += math.pi
    phase = math.atan2(math.sin(phase), math.cos(phase))
    if phase <= -math.pi:
        phase += 2.0 * math.pi

    ss_res = float(np.sum((values - _sine(t, amplitude, freq, phase, offset)) ** 2))
    r2 = 1.0 - ss_res / ss_tot
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - 4)
    return SineFit(amplitude=amplitude, freq=freq, phase=phase, offset=offset, adj_r2=adj_r2)
