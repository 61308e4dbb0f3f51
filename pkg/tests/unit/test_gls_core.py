"""
Test unitari per app.services.gls_core.

Verifica:
- Mappa k -> (a, b, c, d)
- Campi vettoriali di master e slave
- Legge di controllo e ablazione dei sotto-termini
- Identità tra dinamica dell'errore simulata e forma chiusa
- Forme della matrice Q
"""
import math

import numpy as np
import pytest

from app.core.exceptions import InvalidInputError
from app.models.gls import ErrorVec, SigmaVec, StateVec
from app.services.gls_core import (
    control_inputs,
    error_deriv_closed_form,
    error_vec,
    lyapunov_value,
    master_deriv,
    params_from_k,
    q_matrix,
    slave_deriv,
)


def _random_case(rng):
    sigma = SigmaVec(*rng.uniform(-1.0, 1.0, 3))
    x = StateVec(*rng.uniform(-20.0, 20.0, 3))
    y = StateVec(*rng.uniform(-20.0, 20.0, 3))
    return sigma, x, y


class TestParamsFromK:
    """Test per la mappa dei coefficienti."""

    def test_reference_value(self):
        """k = 0.5 produce i coefficienti di riferimento."""
        p = params_from_k(0.5)
        assert p.k == 0.5
        assert p.a == pytest.approx(10.431034482758621, abs=1e-12)
        assert p.b == pytest.approx(27.396551724137932, abs=1e-12)
        assert p.c == pytest.approx(-2.6724137931034484, abs=1e-12)
        assert p.d == pytest.approx(-0.5, abs=1e-12)

    def test_lorenz_limit(self):
        """k = 0 riduce il sistema a Lorenz classico."""
        p = params_from_k(0.0)
        assert (p.a, p.b, p.d) == (10.0, 28.0, -1.0)
        assert p.c == pytest.approx(-8.0 / 3.0)

    def test_upper_end(self):
        """k = 29: a = 35, b = -7, c = -3, d = 28."""
        p = params_from_k(29.0)
        assert p.a == pytest.approx(35.0)
        assert p.b == pytest.approx(-7.0)
        assert p.c == pytest.approx(-3.0)
        assert p.d == pytest.approx(28.0)

    @pytest.mark.parametrize("k", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, k):
        """k non finito solleva InvalidInputError."""
        with pytest.raises(InvalidInputError):
            params_from_k(k)


class TestVectorFields:
    """Test per i campi di master e slave."""

    def test_master_at_ones(self, params):
        """x = (1, 1, 1) -> (0, b + d - 1, 1 + c)."""
        dx = master_deriv(params, StateVec(1.0, 1.0, 1.0))
        assert dx[0] == 0.0
        assert dx[1] == pytest.approx(params.b + params.d - 1.0)
        assert dx[2] == pytest.approx(1.0 + params.c)

    def test_master_lorenz_example(self):
        """k = 0, x = (1, 2, 3) -> (10, 23, -6)."""
        dx = master_deriv(params_from_k(0.0), StateVec(1.0, 2.0, 3.0))
        assert dx == pytest.approx((10.0, 23.0, -6.0))

    def test_origin_is_fixed_point(self, params):
        """Master e slave fermi nell'origine."""
        zero = StateVec(0.0, 0.0, 0.0)
        assert master_deriv(params, zero) == (0.0, 0.0, 0.0)
        assert slave_deriv(params, SigmaVec(1.0, 1.0, 1.0), zero, zero) == pytest.approx((0.0, 0.0, 0.0))

    def test_error_vec(self):
        """E_i = y_i + sigma_i x_i ed e3 = y3 - x3."""
        E = error_vec(SigmaVec(1.0, -1.0, 0.5), StateVec(1.0, 2.0, 4.0), StateVec(3.0, 5.0, 7.0))
        assert E.E1 == 4.0
        assert E.E2 == 3.0
        assert E.E3 == 9.0
        assert E.e3 == 3.0


class TestControlInputs:
    """Test per la legge di controllo."""

    def test_converged_error(self, params):
        """Con E = 0 restano solo i termini in x: u = (0, 6, -4) per x = (1, 2, 3)."""
        u = control_inputs(params, SigmaVec(1.0, 1.0, 1.0), StateVec(1.0, 2.0, 3.0), ErrorVec(0.0, 0.0, 0.0))
        assert u == pytest.approx((0.0, 6.0, -4.0))

    def test_zero_sigma(self, params):
        """sigma = 0: u1 = -b E2, u2 = E3 E1 - a E1 - 2c E2, u3 = -E1 E2."""
        E = ErrorVec(0.5, -2.0, 3.0)
        u = control_inputs(params, SigmaVec(0.0, 0.0, 0.0), StateVec(4.0, 5.0, 6.0), E)
        assert u[0] == pytest.approx(-params.b * E.E2)
        assert u[1] == pytest.approx(E.E3 * E.E1 - params.a * E.E1 - 2.0 * params.c * E.E2)
        assert u[2] == pytest.approx(-E.E1 * E.E2)

    def test_master_at_origin(self, params):
        """x = 0, E = (1, 1, 1): u = (-b, 1 - a - 2c, -1)."""
        u = control_inputs(params, SigmaVec(1.0, 1.0, 1.0), StateVec(0.0, 0.0, 0.0), ErrorVec(1.0, 1.0, 1.0))
        assert u == pytest.approx((-params.b, 1.0 - params.a - 2.0 * params.c, -1.0))

    def test_disabled_term(self, params):
        """Disattivare u_c2 azzera u2 quando gli altri termini sono nulli."""
        u = control_inputs(
            params, SigmaVec(0.0, 0.0, 0.0), StateVec(1.0, 1.0, 1.0), ErrorVec(1.0, 1.0, 1.0),
            disabled=frozenset({"u_c2"}),
        )
        assert u[1] == 0.0
        assert u[0] == pytest.approx(-params.b)

    def test_unknown_term_rejected(self, params):
        """Nome di sotto-termine sconosciuto solleva InvalidInputError."""
        with pytest.raises(InvalidInputError):
            control_inputs(
                params, SigmaVec(0.0, 0.0, 0.0), StateVec(1.0, 1.0, 1.0), ErrorVec(1.0, 1.0, 1.0),
                disabled=frozenset({"u_z9"}),
            )


class TestErrorDynamics:
    """Test per la dinamica dell'errore e la funzione di Lyapunov."""

    def test_closed_form_example(self, params):
        """sigma = 0, E = (0, 1, 0) -> E' = (a - b, d - 2c, 0)."""
        dE = error_deriv_closed_form(params, SigmaVec(0.0, 0.0, 0.0), StateVec(3.0, 4.0, 5.0), ErrorVec(0.0, 1.0, 0.0))
        assert dE[0] == pytest.approx(params.a - params.b)
        assert dE[1] == pytest.approx(params.d - 2.0 * params.c)
        assert dE[2] == 0.0

    def test_closed_form_matches_flow(self, params, rng):
        """y' + sigma x' coincide con la forma chiusa su 1000 stati casuali."""
        for _ in range(1000):
            sigma, x, y = _random_case(rng)
            dx = np.array(master_deriv(params, x))
            dy = np.array(slave_deriv(params, sigma, x, y))
            simulated = dy + np.asarray(sigma) * dx
            closed = np.array(error_deriv_closed_form(params, sigma, x, error_vec(sigma, x, y))[:3])
            assert np.linalg.norm(simulated - closed) <= 1e-10 * max(np.linalg.norm(closed), 1.0)

    def test_lyapunov_identity(self, params, rng):
        """E . E' = -E^T Q E nella forma error_dynamics."""
        for _ in range(1000):
            sigma, x, y = _random_case(rng)
            E = error_vec(sigma, x, y)
            dE = error_deriv_closed_form(params, sigma, x, E)
            lhs = E.E1 * dE[0] + E.E2 * dE[1] + E.E3 * dE[2]
            rhs = q_matrix(params, sigma, x).lyapunov_rate(E)
            assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), lyapunov_value(E), 1.0)

    def test_lyapunov_value(self):
        """V = |E|^2 / 2."""
        assert lyapunov_value(ErrorVec(0.0, 0.0, 0.0)) == 0.0
        assert lyapunov_value(ErrorVec(1.0, 2.0, 2.0)) == 4.5


class TestQMatrix:
    """Test per le due forme della matrice Q."""

    def test_zero_sigma_example(self, params):
        """sigma = 0: Q = [[a, a - b, 0], [b - a, 2c - d, 0], [0, 0, -c]]."""
        Q = q_matrix(params, SigmaVec(0.0, 0.0, 0.0), StateVec(1.0, 2.0, 3.0)).values
        expected = np.array([
            [params.a, params.a - params.b, 0.0],
            [params.b - params.a, 2.0 * params.c - params.d, 0.0],
            [0.0, 0.0, -params.c],
        ])
        np.testing.assert_allclose(Q, expected, atol=1e-12)

    def test_diagonal_entry(self, params):
        """Q(2, 2) = 2c - d = -4.8448 a k = 0.5."""
        Q = q_matrix(params, SigmaVec(1.0, 1.0, 1.0), StateVec(0.0, 0.0, 0.0))
        assert Q.values[1, 1] == pytest.approx(-4.8448, abs=1e-4)

    def test_skew_pairs(self, params, rng):
        """Coppie (1, 3) e (2, 3) antisimmetriche in entrambe le forme."""
        for form in ("error_dynamics", "printed"):
            for _ in range(100):
                sigma, x, _ = _random_case(rng)
                Q = q_matrix(params, sigma, x, form=form).values
                assert Q[0, 2] + Q[2, 0] == pytest.approx(0.0, abs=1e-12)
                assert Q[1, 2] + Q[2, 1] == pytest.approx(0.0, abs=1e-12)

    def test_printed_cross_term(self, params, rng):
        """Forma printed: Q(1, 2) + Q(2, 1) = 2 sigma3 x3."""
        for _ in range(100):
            sigma, x, _ = _random_case(rng)
            Q = q_matrix(params, sigma, x, form="printed").values
            assert Q[0, 1] + Q[1, 0] == pytest.approx(2.0 * sigma.s3 * x.v3, abs=1e-10)

    def test_forms_agree_when_s3_x3_zero(self, params):
        """Le due forme coincidono per sigma3 x3 = 0."""
        sigma = SigmaVec(0.3, -0.7, 0.0)
        x = StateVec(4.0, -5.0, 6.0)
        np.testing.assert_array_equal(
            q_matrix(params, sigma, x).values,
            q_matrix(params, sigma, x, form="printed").values,
        )

    def test_symmetric_part_is_diagonal(self, params, rng):
        """Nella forma error_dynamics la parte simmetrica è diag(a, 2c - d, -c)."""
        sigma, x, _ = _random_case(rng)
        sym = q_matrix(params, sigma, x).symmetric_part()
        np.testing.assert_allclose(
            sym, np.diag([params.a, 2.0 * params.c - params.d, -params.c]), atol=1e-12
        )

    def test_unknown_form(self, params):
        """Forma sconosciuta solleva InvalidInputError."""
        with pytest.raises(InvalidInputError):
            q_matrix(params, SigmaVec(0.0, 0.0, 0.0), StateVec(0.0, 0.0, 0.0), form="transposed")
