"""
Service Layer per la diagnostica di stabilità.

Valuta le condizioni di definitezza positiva della matrice Q in due forme
(simbolica nei coefficienti e polinomiale in k) contro i bound misurati
del master, più un test di Sylvester sugli stati d'angolo.

Le due forme della condizione (ii) non coincidono numericamente
(a k = 0.5: 237.29 contro 422.535); il report le riporta entrambe.
"""
import itertools
import math
from typing import Optional, Tuple

import numpy as np

from app.models.gls import GlsParams, SigmaVec, StateVec
from app.models.trajectory import Bounds
from app.schemas.experiment import ExperimentConfig
from app.schemas.reports import BoundsOut, ConditionResult, PdWorstCase, StabilityReport
from app.services.gls_core import params_from_k, q_matrix
from app.services.integrator import discard_transient, estimate_bounds, integrate_master
from app.utils.logger import get_logger

logger = get_logger(__name__)

Conditions = Tuple[ConditionResult, ConditionResult, ConditionResult]


def conditions_symbolic(p: GlsParams, bounds: Bounds) -> Conditions:
    """
    Condizioni (i)-(iii) nei coefficienti a, b, c, d.

    (i)   a > 0
    (ii)  a^2 + b^2 - 2a(b - c) - ad > P^2
    (iii) 2MNP + aM^2 + (2c - d)N^2 + cP^2 > c(2ac - ad + 2ab - a^2 - b^2)

    Args:
        p: Coefficienti del sistema
        bounds: Bound M, N, P

    Returns:
        Tre ConditionResult con margine LHS - RHS

    Example:
        >>> conditions_symbolic(params_from_k(0.5), Bounds(0, 0, 0))[1].margin
        237.29...
    """
    a, b, c, d = p.a, p.b, p.c, p.d
    M, N, P = bounds.M, bounds.N, bounds.P

    first = a
    second = (a * a + b * b - 2.0 * a * (b - c) - a * d) - P * P
    third_lhs = 2.0 * M * N * P + a * M * M + (2.0 * c - d) * N * N + c * P * P
    third_rhs = c * (2.0 * a * c - a * d + 2.0 * a * b - a * a - b * b)

    return (
        ConditionResult.from_margin(first),
        ConditionResult.from_margin(second),
        ConditionResult.from_margin(third_lhs - third_rhs),
    )


def conditions_k_poly(k: float, bounds: Bounds) -> Conditions:
    """
    Le stesse condizioni riscritte come disuguaglianze in k, con i
    coefficienti numerici pubblicati.

    (i)   10 + (25/29)k > 0
    (ii)  k^2 - 527.49k + 686.03 > P^2
    (iii) -(0.0056k^3 + 1.84k^2 - (0.86M^2 + 1.01N^2 + 0.01P^2 - 109.8)k)
          > -2MNP + 10M^2 - 4.33N^2 + 2.67P^2

    Note:
        - A k = 0.5, P = 21 la (ii) vale 422.535 - 441 = -18.465
    """
    M, N, P = bounds.M, bounds.N, bounds.P

    first = 10.0 + (25.0 / 29.0) * k
    second = (k * k - 527.49 * k + 686.03) - P * P
    third_lhs = -(
        0.0056 * k ** 3
        + 1.84 * k * k
        - (0.86 * M * M + 1.01 * N * N + 0.01 * P * P - 109.8) * k
    )
    third_rhs = -2.0 * M * N * P + 10.0 * M * M - 4.33 * N * N + 2.67 * P * P

    return (
        ConditionResult.from_margin(first),
        ConditionResult.from_margin(second),
        ConditionResult.from_margin(third_lhs - third_rhs),
    )


def pd_check_worstcase(p: GlsParams, sigma: SigmaVec, bounds: Bounds) -> Tuple[bool, float]:
    """
    Test di Sylvester sulla parte simmetrica di Q negli 8 stati d'angolo.

    Usa la forma "printed" di Q, quella da cui discendono le condizioni.

    Args:
        p: Coefficienti del sistema
        sigma: Parametri di controllo
        bounds: Bound M, N, P

    Returns:
        (holds, min_minor): holds è True se tutti i minori principali di
        testa sono positivi in ogni angolo; min_minor è il minimo trovato

    Example:
        >>> pd_check_worstcase(params_from_k(0.5), SigmaVec(0, 0, 0), Bounds(0, 0, 0))
        (False, -...)
    """
    minors = []
    for signs in itertools.product((1.0, -1.0), repeat=3):
        corner = StateVec(signs[0] * bounds.M, signs[1] * bounds.N, signs[2] * bounds.P)
        minors.extend(q_matrix(p, sigma, corner, form="printed").leading_minors())
    min_minor = min(minors)
    return bool(min_minor > 0), float(min_minor)


def error_block_saddle(p: GlsParams, sigma3: float) -> Optional[Tuple[float, float]]:
    """
    Intervallo di x3 in cui il blocco (E1, E2) della dinamica dell'errore
    è una sella.

    Il blocco [[-a, a - b - s3 x3], [b - a + s3 x3, d - 2c]] ha determinante
    (b - a + s3 x3)^2 - a(d - 2c): è negativo, e il blocco localmente
    instabile, per |b - a + s3 x3| < sqrt(a(d - 2c)).

    Args:
        p: Coefficienti del sistema
        sigma3: Terza componente di sigma

    Returns:
        (lo, hi) in x3; (-inf, inf) se sigma3 = 0 e la sella è permanente;
        None se il determinante non è mai negativo

    Example:
        >>> error_block_saddle(params_from_k(0.5), -1.0)
        (9.856..., 24.074...)
    """
    spread_sq = p.a * (p.d - 2.0 * p.c)
    if spread_sq <= 0:
        return None
    spread = math.sqrt(spread_sq)
    offset = p.b - p.a
    if sigma3 == 0:
        return (-math.inf, math.inf) if abs(offset) < spread else None
    ends = ((-offset - spread) / sigma3, (-offset + spread) / sigma3)
    return (min(ends), max(ends))


def saddle_fraction(x3: np.ndarray, interval: Optional[Tuple[float, float]]) -> float:
    """Frazione dei campioni di x3 dentro l'intervallo di sella (0 se None)."""
    if interval is None or len(x3) == 0:
        return 0.0
    lo, hi = interval
    return float(np.mean((x3 > lo) & (x3 < hi)))


class StabilityService:
    """
    Service che compone simulazione, stima dei bound e condizioni.

    Responsabilità:
    - Integrare il master libero (salvo override dei bound)
    - Stimare M, N, P dopo il transitorio
    - Produrre lo StabilityReport serializzabile
    """

    def stability_report(self, config: ExperimentConfig) -> StabilityReport:
        """
        Esegue l'intera diagnostica di stabilità.

        Processo:
        1. Bound da override [stability] M, N, P oppure da un run libero
           di bounds_steps passi con transitorio scartato
        2. Condizioni simboliche, polinomiali in k e test sugli angoli
        3. Con i bound simulati, frazione del tempo in cui x3 del master
           cade nell'intervallo di sella del blocco (E1, E2)

        Args:
            config: Configurazione dell'esperimento

        Returns:
            StabilityReport: Report puro (stessa config, stessi byte JSON)

        Raises:
            IntegrationDivergedError: Propagata dal run del master
        """
        sim = config.sim
        options = config.stability
        p = params_from_k(sim.k)

        saddle = error_block_saddle(p, sim.sigma[2])
        fraction = None
        if options.has_override:
            bounds = Bounds(M=options.M, N=options.N, P=options.P)
            source = "override"
        else:
            traj = integrate_master(sim, n_steps=options.bounds_steps)
            transient = min(sim.transient_steps, options.bounds_steps - 1)
            window = discard_transient(traj, transient)
            bounds = estimate_bounds(window)
            fraction = saddle_fraction(window.x[:, 2], saddle)
            source = "simulated"

        holds, min_minor = pd_check_worstcase(p, sim.sigma_vec, bounds)
        report = StabilityReport(
            k=sim.k,
            params={"a": p.a, "b": p.b, "c": p.c, "d": p.d},
            bounds=BoundsOut(M=bounds.M, N=bounds.N, P=bounds.P),
            bounds_source=source,
            symbolic=conditions_symbolic(p, bounds),
            k_poly=conditions_k_poly(sim.k, bounds),
            pd_worstcase=PdWorstCase(holds=holds, min_minor=min_minor),
            sigma=sim.sigma,
            saddle_fraction=fraction,
        )
        logger.info(
            "Report di stabilità calcolato",
            extra={"k": sim.k, "bounds_source": source, "pd_holds": holds}
        )
        return report
