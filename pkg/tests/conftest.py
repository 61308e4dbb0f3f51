"""
Configurazione pytest e fixtures condivise per i test.

Questo file contiene:
- Parametri e configurazioni di default
- Run accoppiati costosi, calcolati una volta per sessione e riusati
- Helper per scrivere file INI temporanei
"""
import numpy as np
import pytest

from app.schemas.simulation import SimConfig
from app.services.gls_core import params_from_k
from app.services.integrator import integrate_coupled


# --- PARAMETRI ---

@pytest.fixture
def params():
    """Coefficienti del sistema a k = 0.5."""
    return params_from_k(0.5)


@pytest.fixture
def rng():
    """Generatore con seed fisso: nessuna casualità non riproducibile."""
    return np.random.default_rng(20240601)


@pytest.fixture
def short_sim():
    """Configurazione breve per test veloci (400 passi, t = 20)."""
    return SimConfig(n_steps=400, transient_steps=100)


# --- RUN ACCOPPIATI DI SESSIONE ---

@pytest.fixture(scope="session")
def anti_sync_run():
    """Run di default con sigma = (1, 1, 1): anti-sincronizzazione completa."""
    return integrate_coupled(SimConfig(sigma=(1.0, 1.0, 1.0)))


@pytest.fixture(scope="session")
def mixed_run():
    """Run di default con sigma = (1, 1, -1): x3 sincronizzato, x1 e x2 anti."""
    return integrate_coupled(SimConfig(sigma=(1.0, 1.0, -1.0)))


# --- FILE DI CONFIGURAZIONE ---

@pytest.fixture
def write_config(tmp_path):
    """
    Scrive un file INI nella directory temporanea e ne restituisce il path.

    Example:
        def test_x(write_config):
            path = write_config("[sim]\\nh = 0.05\\n")
    """
    def _write(text: str, name: str = "experiment.ini"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


SMALL_CONFIG = """\
[sim]
h = 0.05
n_steps = 400
transient_steps = 100
k = 0.5

[sigma]
s1 = 1
s2 = 1
s3 = 1

[comms]
n_steps = 2400
transient_steps = 352

[stability]
bounds_steps = 2000
"""


@pytest.fixture
def small_config_path(write_config):
    """Configurazione INI ridotta per i test della CLI."""
    return write_config(SMALL_CONFIG)
