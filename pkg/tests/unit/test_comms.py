"""
Test unitari per app.services.comms_service e app.schemas.comms.

Verifica:
- Messaggi sinusoidali e validazione della configurazione
- Codifica mask/drive e identità con ampiezza nulla
- Residuo decodificato
- Costruzione dei casi
"""
import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from app.core.exceptions import InvalidInputError
from app.models.gls import SigmaVec
from app.models.trajectory import Trajectory
from app.schemas.comms import CommsConfig, CommsOptions, MessageSpec
from app.schemas.simulation import SimConfig
from app.services.comms_service import (
    CASE_FREQUENCIES,
    build_case_config,
    decode,
    decode_residual,
    encode_and_run,
    message_sample,
    message_series,
    residual_lines,
)
from app.services.integrator import coupled_field, integrate_coupled
from app.services.spectral import power_spectrum


def _messages(amplitude, freqs=(1.0, 1.088, 1.25)):
    return tuple(MessageSpec(amplitude=amplitude, freq=f) for f in freqs)


MIRROR = np.array([-1.0, -1.0, 1.0, -1.0, -1.0, 1.0])


class TestMessages:
    """Test per message_sample e message_series."""

    def test_zero_amplitude_is_offset(self):
        spec = MessageSpec(offset=0.3, amplitude=0.0, freq=1.0)
        assert message_sample(spec, 0.0) == 0.3
        assert message_sample(spec, 17.3) == 0.3

    def test_quarter_period(self):
        assert message_sample(MessageSpec(amplitude=0.01, freq=1.0), 0.25) == pytest.approx(0.01)

    def test_negative_time(self):
        with pytest.raises(InvalidInputError):
            message_sample(MessageSpec(freq=1.0), -0.05)

    def test_series_peak(self):
        """m(t) a 1.088 Hz su t in [0, 20): picco spettrale entro un bin."""
        t = np.arange(400) * 0.05
        series = message_series(MessageSpec(amplitude=0.01, freq=1.088), t)
        spectrum = power_spectrum(series, 20.0)
        assert abs(spectrum.peak_frequency() - 1.088) <= spectrum.bin_width

    def test_series_matches_samples(self):
        spec = MessageSpec(offset=0.1, amplitude=0.02, freq=1.25)
        t = np.arange(50) * 0.05
        expected = [message_sample(spec, value) for value in t]
        np.testing.assert_allclose(message_series(spec, t), expected, atol=1e-15)


class TestCommsConfig:
    """Test per la validazione della configurazione."""

    def test_negative_amplitude(self):
        with pytest.raises(PydanticValidationError):
            MessageSpec(amplitude=-0.01, freq=1.0)

    def test_duplicate_frequencies(self):
        with pytest.raises(PydanticValidationError):
            CommsConfig(sim=SimConfig(), messages=_messages(0.01, (1.0, 1.0, 1.25)))

    def test_frequency_above_nyquist(self):
        """h = 0.05: Nyquist = 10."""
        with pytest.raises(PydanticValidationError):
            CommsConfig(sim=SimConfig(), messages=_messages(0.01, (1.0, 2.0, 10.0)))

    def test_automatic_bands_span_three_bins(self):
        """Con bin da 0.0005 la banda copre il bin del messaggio e i due vicini."""
        config = CommsConfig(sim=SimConfig(), messages=_messages(0.01))
        assert config.band_for(0, 0.0005) == pytest.approx((0.99925, 1.00075))
        assert config.band_for(2, 0.0005) == pytest.approx((1.24925, 1.25075))

    def test_automatic_band_limited_by_neighbour(self):
        """Bin larghi: la banda si ferma a 0.45 volte la distanza da f2."""
        config = CommsConfig(sim=SimConfig(), messages=_messages(0.01))
        low, high = config.band_for(0, 0.1)
        assert high - 1.0 == pytest.approx(0.45 * 0.088)
        assert 1.0 - low == pytest.approx(0.45 * 0.088)

    def test_explicit_bands(self):
        bands = ((0.9, 1.05), (1.06, 1.1), (1.2, 1.3))
        config = CommsConfig(sim=SimConfig(), messages=_messages(0.01), bands=bands)
        assert config.band_for(1, 0.0005) == (1.06, 1.1)


class TestEncodeAndRun:
    """Test per la codifica."""

    def test_zero_amplitude_matches_plain_run(self, short_sim):
        """Ampiezza e offset nulli: stessi bit di integrate_coupled."""
        config = CommsConfig(sim=short_sim, messages=_messages(0.0))
        traj = encode_and_run(config)
        plain = integrate_coupled(short_sim)
        assert np.array_equal(traj.x, plain.x)
        assert np.array_equal(traj.y, plain.y)
        assert np.array_equal(traj.transmitted, plain.x)

    def test_mask_leaves_master_untouched(self, short_sim):
        """In mask il master coincide con quello del run senza messaggi."""
        config = CommsConfig(sim=short_sim, messages=_messages(0.01))
        traj = encode_and_run(config)
        plain = integrate_coupled(short_sim)
        assert np.array_equal(traj.x, plain.x)
        offsets = traj.transmitted - traj.x
        np.testing.assert_allclose(offsets[:, 2], message_series(config.messages[2], traj.t), atol=1e-12)

    def test_drive_perturbs_master(self, short_sim):
        """In drive il master cambia e il canale trasmesso è il master stesso."""
        config = CommsConfig(sim=short_sim, messages=_messages(0.01), injection="drive")
        traj = encode_and_run(config)
        plain = integrate_coupled(short_sim)
        assert not np.array_equal(traj.x, plain.x)
        assert np.array_equal(traj.transmitted, traj.x)


class TestMirrorSymmetry:
    """
    Il campo accoppiato commuta con (x1, x2, x3) -> (-x1, -x2, x3), stessa
    mappa su y, se m1 e m2 cambiano segno e m3 resta invariato.
    """

    @pytest.mark.parametrize("injection", ["mask", "drive"])
    @pytest.mark.parametrize("sigma", [(1.0, 1.0, 1.0), (1.0, 1.0, -1.0), (1.0, 1.0, 0.0)])
    def test_field_commutes_with_mirror(self, params, injection, sigma):
        m = (0.013, -0.021, 0.034)
        flipped = (-m[0], -m[1], m[2])
        key = "transmitted_offset" if injection == "mask" else "master_forcing"
        field = coupled_field(params, SigmaVec(*sigma), **{key: lambda t: m})
        mirrored_field = coupled_field(params, SigmaVec(*sigma), **{key: lambda t: flipped})

        state = np.array([3.1, -4.7, 22.5, -2.9, 4.4, -21.8])
        direct = np.array(field(0.3, tuple(state)))
        mirrored = np.array(mirrored_field(0.3, tuple(MIRROR * state)))
        np.testing.assert_allclose(mirrored, MIRROR * direct, rtol=1e-12, atol=1e-12)

    def test_flipping_message_three_breaks_symmetry(self, params):
        """Con m3 di segno opposto la derivata speculare non torna."""
        m = (0.0, 0.0, 0.5)
        field = coupled_field(params, SigmaVec(1.0, 1.0, 1.0), transmitted_offset=lambda t: m)
        flipped = coupled_field(params, SigmaVec(1.0, 1.0, 1.0), transmitted_offset=lambda t: (0.0, 0.0, -0.5))
        state = np.array([3.1, -4.7, 22.5, -2.9, 4.4, -21.8])
        direct = np.array(field(0.3, tuple(state)))
        mirrored = np.array(flipped(0.3, tuple(MIRROR * state)))
        assert not np.allclose(mirrored, MIRROR * direct)


class TestDecode:
    """Test per il residuo e la decodifica."""

    def test_residual_formula(self):
        """r = y3 + sigma3 * x~3, con x~ preferito a x."""
        t = np.array([0.0, 0.05])
        x = np.array([[0.0, 0.0, 2.0], [0.0, 0.0, 3.0]])
        y = np.array([[0.0, 0.0, 5.0], [0.0, 0.0, 7.0]])
        transmitted = x + 0.5
        traj = Trajectory(t=t, x=x, h=0.05, y=y, E=y, transmitted=transmitted)
        np.testing.assert_allclose(decode_residual(traj, -1.0), [2.5, 3.5])
        plain = Trajectory(t=t, x=x, h=0.05, y=y, E=y)
        np.testing.assert_allclose(decode_residual(plain, 1.0), [7.0, 10.0])

    def test_residual_requires_coupled(self):
        traj = Trajectory(t=np.array([0.0]), x=np.zeros((1, 3)), h=0.05)
        with pytest.raises(InvalidInputError):
            decode_residual(traj, 1.0)

    def test_decode_shapes(self):
        """Un fit e un picco per messaggio, bande dentro (0, Nyquist)."""
        sim = SimConfig(n_steps=2400, transient_steps=352)
        config = CommsConfig(sim=sim, messages=_messages(0.01))
        decoded = decode(config, encode_and_run(config), sim.transient_steps)
        assert len(decoded.residual) == 2049
        assert decoded.t[0] == 352 * 0.05
        assert [fit.message_index for fit in decoded.fits] == [1, 2, 3]
        assert [match.target for match in decoded.peaks] == [1.0, 1.088, 1.25]
        assert all(0 < low < high < 10.0 for low, high in decoded.bands)

    def test_residual_lines_flags_tone(self, rng):
        """Tono a 1.25 sopra il rumore: segnalato, e solo nel suo intorno."""
        t = np.arange(20000) * 0.05
        residual = 0.01 * rng.standard_normal(t.size) + 0.01 * np.sin(2.0 * np.pi * 1.25 * t)
        lines = residual_lines(residual, 20.0)
        bin_width = 20.0 / 1024
        assert lines.size > 0
        assert np.all(np.abs(lines - 1.25) <= 2 * bin_width)

    def test_residual_lines_ignore_slow_drift(self, rng):
        """Un tono sotto 0.5 non conta come linea."""
        t = np.arange(20000) * 0.05
        residual = 0.01 * rng.standard_normal(t.size) + 0.05 * np.sin(2.0 * np.pi * 0.2 * t)
        assert residual_lines(residual, 20.0).size == 0


class TestBuildCaseConfig:
    """Test per la costruzione dei casi."""

    def test_case_one_negative(self):
        config = build_case_config(1, "negative", SimConfig(), CommsOptions())
        assert config.frequencies == CASE_FREQUENCIES[1]
        assert config.sim.sigma == (1.0, 1.0, 1.0)
        assert config.sim.n_steps == 41999
        assert all(spec.amplitude == 0.01 for spec in config.messages)

    def test_literal_regimes(self):
        options = CommsOptions()
        positive = build_case_config(2, "positive", SimConfig(), options, preset="literal")
        zero = build_case_config(2, "zero", SimConfig(), options, preset="literal")
        assert positive.sim.sigma == (0.0, 0.0, 0.0)
        assert zero.sim.sigma == (0.4, 0.4, 0.4)

    def test_amplitude_override(self):
        config = build_case_config(3, "zero", SimConfig(), CommsOptions(), amplitude=0.003)
        assert all(spec.amplitude == 0.003 for spec in config.messages)
        assert config.sim.sigma == (1.0, 1.0, 0.0)

    @pytest.mark.parametrize("case_id, regime", [(5, "positive"), (1, "sideways")])
    def test_unknown_case_or_regime(self, case_id, regime):
        with pytest.raises(InvalidInputError):
            build_case_config(case_id, regime, SimConfig(), CommsOptions())
