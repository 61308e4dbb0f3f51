"""
Test unitari per app.services.spectral.

Verifica:
- Spettro di potenza con finestra di Hann
- Filtro passa-banda a maschera in frequenza
- Ricerca dei picchi
- Spettro di Welch e linee sopra la mediana locale
- Fit sinusoidale e R^2 aggiustato
"""
import math

import numpy as np
import pytest
from scipy import optimize

from app.core.exceptions import DegenerateInputError, FitFailedError, InvalidInputError
from app.services.spectral import (
    band_pass,
    band_power,
    fit_sine,
    identify_peaks,
    line_outliers,
    power_spectrum,
    welch_spectrum,
)

SAMPLE_RATE = 20.0


def _tone(freq, n, amplitude=1.0, phase=0.0, offset=0.0):
    t = np.arange(n) / SAMPLE_RATE
    return amplitude * np.sin(2.0 * np.pi * freq * t + phase) + offset


class TestPowerSpectrum:
    """Test per power_spectrum."""

    def test_pure_tone_peak(self):
        """Sinusoide a 1.25 Hz: picco entro un bin."""
        spectrum = power_spectrum(_tone(1.25, 2048), SAMPLE_RATE)
        assert abs(spectrum.peak_frequency() - 1.25) <= spectrum.bin_width

    def test_frequency_axis(self):
        """Bin in (0, Nyquist], DC escluso."""
        spectrum = power_spectrum(_tone(1.0, 1024), SAMPLE_RATE)
        assert spectrum.freq[0] > 0
        assert spectrum.freq[-1] == pytest.approx(SAMPLE_RATE / 2)
        assert spectrum.bin_width == pytest.approx(SAMPLE_RATE / 1024)
        assert spectrum.freq.size == spectrum.power.size == 512

    def test_white_noise_has_no_dominant_line(self, rng):
        """Rumore bianco: meno dell'1% dei bin supera 10 volte la mediana."""
        spectrum = power_spectrum(rng.standard_normal(2048), SAMPLE_RATE)
        outliers = np.count_nonzero(spectrum.power > 10.0 * np.median(spectrum.power))
        assert outliers < 0.01 * spectrum.power.size

    def test_offset_removed(self):
        """Una costante aggiunta non cambia lo spettro."""
        plain = power_spectrum(_tone(2.0, 512), SAMPLE_RATE)
        shifted = power_spectrum(_tone(2.0, 512, offset=5.0), SAMPLE_RATE)
        np.testing.assert_allclose(plain.power, shifted.power, atol=1e-8)

    def test_too_short(self):
        with pytest.raises(DegenerateInputError):
            power_spectrum(np.arange(10.0), SAMPLE_RATE)


class TestBandPass:
    """Test per band_pass."""

    def test_separates_tones(self):
        """Toni a 1 e 2 Hz su periodi interi: la banda [0.9, 1.1] recupera il primo."""
        low = _tone(1.0, 2000)
        mixed = low + _tone(2.0, 2000)
        recovered = band_pass(mixed, SAMPLE_RATE, 0.9, 1.1)
        assert np.corrcoef(recovered, low)[0, 1] > 0.999
        np.testing.assert_allclose(recovered, low, atol=1e-9)

    def test_empty_band_removes_signal(self):
        mixed = _tone(1.0, 2000) + _tone(2.0, 2000)
        recovered = band_pass(mixed, SAMPLE_RATE, 3.0, 4.0)
        assert np.sqrt(np.mean(recovered ** 2)) < 1e-6 * np.sqrt(np.mean(mixed ** 2))

    def test_idempotent(self, rng):
        noise = rng.standard_normal(1024)
        once = band_pass(noise, SAMPLE_RATE, 1.0, 3.0)
        twice = band_pass(once, SAMPLE_RATE, 1.0, 3.0)
        np.testing.assert_allclose(once, twice, atol=1e-12)

    @pytest.mark.parametrize("band", [(1.1, 0.9), (0.0, 1.0), (1.0, 10.0), (-1.0, 2.0)])
    def test_invalid_band(self, band):
        with pytest.raises(InvalidInputError):
            band_pass(_tone(1.0, 256), SAMPLE_RATE, *band)


class TestPeaks:
    """Test per identify_peaks e band_power."""

    def test_two_tones_identified(self):
        spectrum = power_spectrum(_tone(1.0, 2048) + 0.5 * _tone(1.5, 2048), SAMPLE_RATE)
        matches = identify_peaks(spectrum, [1.0, 1.5])
        assert [match.within_tolerance for match in matches] == [True, True]
        assert [match.target for match in matches] == [1.0, 1.5]
        assert all(match.distance_bins <= 1.0 for match in matches)

    def test_band_power_concentrated(self):
        spectrum = power_spectrum(_tone(1.0, 2048), SAMPLE_RATE)
        assert band_power(spectrum, 0.95, 1.05) > 1e6 * band_power(spectrum, 3.0, 4.0)


class TestFitSine:
    """Test per fit_sine."""

    def test_exact_recovery(self):
        """Sinusoide pura: parametri esatti e R^2 aggiustato >= 0.999999."""
        series = _tone(1.25, 2048, amplitude=1.5, phase=0.3, offset=0.2)
        fit = fit_sine(series, SAMPLE_RATE, 1.25)
        assert fit.amplitude == pytest.approx(1.5, rel=1e-6)
        assert fit.freq == pytest.approx(1.25, rel=1e-6)
        assert fit.phase == pytest.approx(0.3, abs=1e-6)
        assert fit.offset == pytest.approx(0.2, abs=1e-6)
        assert fit.adj_r2 >= 0.999999

    def test_off_bin_frequency(self):
        """Frequenza fuori bin: il fit la ritrova oltre la risoluzione spettrale."""
        series = _tone(1.2345, 1024, amplitude=0.8)
        fit = fit_sine(series, SAMPLE_RATE, 1.2)
        assert fit.freq == pytest.approx(1.2345, abs=1e-6)
        assert fit.adj_r2 >= 0.999999

    def test_phase_reference_with_t0(self):
        """Con t0 la fase è riferita a t = 0."""
        t0 = 100.0
        t = t0 + np.arange(2048) / SAMPLE_RATE
        series = np.sin(2.0 * np.pi * 1.25 * t + 1.0)
        fit = fit_sine(series, SAMPLE_RATE, 1.25, t0=t0)
        assert fit.phase == pytest.approx(1.0, abs=1e-5)

    def test_negative_amplitude_normalized(self):
        """Ampiezza sempre >= 0 e fase in (-pi, pi]."""
        series = -_tone(1.25, 2048, amplitude=2.0)
        fit = fit_sine(series, SAMPLE_RATE, 1.25)
        assert fit.amplitude == pytest.approx(2.0, rel=1e-6)
        assert -math.pi < fit.phase <= math.pi
        assert abs(fit.phase) == pytest.approx(math.pi, abs=1e-5)

    def test_noise_has_low_r2(self, rng):
        fit = fit_sine(rng.standard_normal(2048), SAMPLE_RATE, 1.0)
        assert fit.adj_r2 < 0.5

    def test_hint_above_quarter_rate(self):
        with pytest.raises(InvalidInputError):
            fit_sine(_tone(1.0, 256), SAMPLE_RATE, 6.0)

    def test_constant_series(self):
        with pytest.raises(DegenerateInputError):
            fit_sine(np.full(256, 3.0), SAMPLE_RATE, 1.0)

    def test_optimizer_failure(self, monkeypatch):
        """RuntimeError dell'ottimizzatore diventa FitFailedError con il seed."""
        def fail(*args, **kwargs):
            raise RuntimeError("Optimal parameters not found")

        monkeypatch.setattr(optimize, "curve_fit", fail)
        with pytest.raises(FitFailedError) as exc_info:
            fit_sine(_tone(1.25, 512), SAMPLE_RATE, 1.25)
        assert len(exc_info.value.details["seed"]) == 4


class TestWelchLines:
    """Test per welch_spectrum e line_outliers."""

    def test_segment_resolution(self, rng):
        spectrum = welch_spectrum(rng.standard_normal(8192), SAMPLE_RATE, segment_length=256)
        assert spectrum.n_samples == 256
        assert spectrum.bin_width == pytest.approx(SAMPLE_RATE / 256)
        assert spectrum.freq[0] > 0

    def test_segment_capped_by_series(self, rng):
        spectrum = welch_spectrum(rng.standard_normal(300), SAMPLE_RATE)
        assert spectrum.n_samples == 300

    def test_white_noise_has_no_lines(self, rng):
        spectrum = welch_spectrum(rng.standard_normal(8192), SAMPLE_RATE, segment_length=256)
        assert line_outliers(spectrum).size == 0

    def test_tone_in_noise_is_flagged(self, rng):
        """Tono a 2.5 Hz, su un bin esatto: segnalato lui e al più i vicini."""
        series = rng.standard_normal(8192) + _tone(2.5, 8192)
        spectrum = welch_spectrum(series, SAMPLE_RATE, segment_length=256)
        lines = line_outliers(spectrum)
        assert np.any(np.isclose(lines, 2.5))
        assert np.all(np.abs(lines - 2.5) <= 2 * spectrum.bin_width)

    def test_f_min_skips_low_bins(self, rng):
        series = rng.standard_normal(8192) + _tone(2.5, 8192)
        spectrum = welch_spectrum(series, SAMPLE_RATE, segment_length=256)
        assert line_outliers(spectrum, f_min=3.0).size == 0

    def test_linear_trend_removed(self, rng):
        """Una rampa aggiunta non crea linee a bassa frequenza."""
        ramp = np.linspace(0.0, 50.0, 8192)
        spectrum = welch_spectrum(rng.standard_normal(8192) + ramp, SAMPLE_RATE, segment_length=256)
        assert line_outliers(spectrum).size == 0

    @pytest.mark.parametrize("factor, half_window", [(0.0, 10), (-1.0, 10), (10.0, 0)])
    def test_invalid_threshold(self, rng, factor, half_window):
        spectrum = welch_spectrum(rng.standard_normal(1024), SAMPLE_RATE)
        with pytest.raises(InvalidInputError):
            line_outliers(spectrum, factor=factor, half_window=half_window)

    def test_segment_too_short(self, rng):
        with pytest.raises(InvalidInputError):
            welch_spectrum(rng.standard_normal(1024), SAMPLE_RATE, segment_length=8)
