"""
Service Layer per l'analisi della sincronizzazione.

Quantifica lo stato di sincronizzazione di un run accoppiato:
pendenza m del grafico di sincronizzazione e suo errore standard dm,
qualità S_Q = 1/dm, correlazione incrociata normalizzata, tempi di
convergenza dell'errore e sweep su griglie di sigma.
"""
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from app.core.config import DEFAULT_WORKERS
from app.core.exceptions import ConfigError, DegenerateInputError, InvalidInputError
from app.models.gls import SigmaVec
from app.models.trajectory import Trajectory
from app.schemas.reports import SweepPoint, SweepResult, SyncMetrics
from app.schemas.simulation import SimConfig
from app.services.integrator import discard_transient, integrate_coupled
from app.utils.logger import get_logger
from app.utils.validators import validate_finite, validate_positive, validate_series

logger = get_logger(__name__)

PAIRS: Tuple[str, str, str] = ("x1y1", "x2y2", "x3y3")

# Soglia di default per i tempi di convergenza di E_i
CONVERGENCE_EPS = 1e-3

# Griglie di default per preset: (start, stop, step) del parametro s
PRESET_GRIDS = {
    "literal": (0.0, 1.0, 0.1),
    "figure": (-1.0, 1.0, 0.2),
}


# --- METRICHE ---

def fit_sync_slope(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """
    Regressione ai minimi quadrati di ys su xs.

    Args:
        xs: Campioni del master
        ys: Campioni dello slave (stessa lunghezza)

    Returns:
        (m, dm): pendenza ed errore standard della pendenza

    Raises:
        DegenerateInputError: Meno di 3 campioni o xs a varianza nulla
        InvalidInputError: Lunghezze diverse

    Example:
        >>> fit_sync_slope([0, 1, 2, 3], [0, -1, -2, -3])
        (-1.0, 0.0)
    """
    x = validate_series(xs, 3, "xs")
    y = validate_series(ys, 3, "ys")
    if x.size != y.size:
        raise InvalidInputError(
            message="xs e ys devono avere la stessa lunghezza",
            details={"len_xs": int(x.size), "len_ys": int(y.size)}
        )
    if np.ptp(x) == 0:
        raise DegenerateInputError(
            message="xs a varianza nulla: pendenza non definita",
            details={"n_samples": int(x.size)}
        )
    try:
        result = stats.linregress(x, y)
    except ValueError as exc:
        raise DegenerateInputError(message="Regressione non definita", details={"reason": str(exc)}) from exc
    return float(result.slope), float(result.stderr)


def sync_quality(dm: float) -> float:
    """
    Qualità di sincronizzazione S_Q = 1/dm.

    Raises:
        InvalidInputError: Se dm è negativo o non finito

    Example:
        >>> sync_quality(0.01)
        100.0
        >>> sync_quality(0.0)
        inf
    """
    dm = validate_finite(dm, "dm")
    if dm < 0:
        raise InvalidInputError(message="dm deve essere >= 0", details={"dm": dm})
    if dm == 0:
        return math.inf
    return 1.0 / dm


def cross_correlation(
    xs: Sequence[float],
    ys: Sequence[float],
    max_lag: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Correlazione incrociata normalizzata ai ritardi interi [-max_lag, max_lag].

    r(L) = sum_i xc[i] yc[i + L] / sqrt(Sxx Syy), con xc, yc a media nulla.
    La normalizzazione è quella polarizzata (divisione per la lunghezza
    intera), quindi |r| <= 1 a ogni ritardo.

    Args:
        xs, ys: Serie della stessa lunghezza > max_lag
        max_lag: Ritardo massimo in campioni (>= 0)

    Returns:
        (lags, r): ritardi interi e correlazioni

    Raises:
        InvalidInputError: Lunghezze diverse o max_lag fuori range
        DegenerateInputError: Serie a varianza nulla
    """
    x = validate_series(xs, 2, "xs")
    y = validate_series(ys, 2, "ys")
    n = x.size
    if y.size != n:
        raise InvalidInputError(
            message="xs e ys devono avere la stessa lunghezza",
            details={"len_xs": int(n), "len_ys": int(y.size)}
        )
    if not 0 <= max_lag < n:
        raise InvalidInputError(
            message="max_lag deve essere in [0, len - 1]",
            details={"max_lag": max_lag, "length": int(n)}
        )

    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(np.dot(xc, xc))
    syy = float(np.dot(yc, yc))
    if sxx == 0 or syy == 0:
        raise DegenerateInputError(message="Serie a varianza nulla", details={"n_samples": int(n)})
    norm = math.sqrt(sxx * syy)

    lags = np.arange(-max_lag, max_lag + 1)
    r = np.empty(lags.size, dtype=float)
    for index, lag in enumerate(lags):
        if lag >= 0:
            r[index] = np.dot(xc[:n - lag], yc[lag:]) / norm
        else:
            r[index] = np.dot(xc[-lag:], yc[:n + lag]) / norm
    return lags, r


def convergence_time(
    series: np.ndarray,
    eps: float,
    t: Optional[np.ndarray] = None,
) -> Optional[float]:
    """
    Primo istante T dopo il quale |E(t)| < eps per tutto il resto della finestra.

    Args:
        series: Serie dell'errore, shape (n,) oppure (n, 3) (usa max_i |E_i|)
        eps: Soglia (> 0)
        t: Istanti dei campioni (default: indici dei campioni)

    Returns:
        Optional[float]: T, oppure None se l'ultimo campione è ancora sopra soglia
    """
    eps = validate_positive(eps, "eps")
    values = np.abs(np.asarray(series, dtype=float))
    if values.ndim == 2:
        values = values.max(axis=1)
    if values.size == 0:
        return None
    times = np.arange(values.size, dtype=float) if t is None else np.asarray(t, dtype=float)

    above = np.flatnonzero(~(values < eps))
    if above.size == 0:
        return float(times[0])
    last = int(above[-1])
    if last == values.size - 1:
        return None
    return float(times[last + 1])


def compute_sync_metrics(
    traj: Trajectory,
    transient_steps: int,
    eps: float = CONVERGENCE_EPS,
) -> Tuple[SyncMetrics, SyncMetrics, SyncMetrics]:
    """
    Metriche delle tre coppie (x_i, y_i) di un run accoppiato.

    Pendenza, dm, S_Q e r0 sono calcolati sul suffisso dopo il transitorio;
    il tempo di convergenza di E_i sull'intero run.

    Raises:
        InvalidInputError: Se la traiettoria non è accoppiata
        DegenerateInputError: Propagata (es. canale costante)
    """
    if not traj.is_coupled:
        raise InvalidInputError(message="Servono le traiettorie di master e slave")
    window = discard_transient(traj, transient_steps)

    metrics = []
    for index, pair in enumerate(PAIRS):
        xs = window.x[:, index]
        ys = window.y[:, index]
        m, dm = fit_sync_slope(xs, ys)
        _, r = cross_correlation(xs, ys, 0)
        metrics.append(SyncMetrics(
            pair=pair,
            m=m,
            dm=dm,
            s_q=sync_quality(dm),
            r0=float(r[0]),
            conv_time=convergence_time(traj.E[:, index], eps, traj.t),
        ))
    return tuple(metrics)


def _degenerate_metrics() -> Tuple[SyncMetrics, SyncMetrics, SyncMetrics]:
    nan = math.nan
    return tuple(SyncMetrics(pair=pair, m=nan, dm=nan, s_q=nan, r0=nan) for pair in PAIRS)


def _run_sweep_point(task: Tuple[SimConfig, Tuple[float, float, float]]) -> SweepPoint:
    """Worker dello sweep: deve stare a livello di modulo per il pickling."""
    base, sigma = task
    config = base.model_copy(update={"sigma": tuple(sigma)})
    traj = integrate_coupled(config)
    try:
        metrics = compute_sync_metrics(traj, config.transient_steps)
    except DegenerateInputError as exc:
        logger.warning(
            "Punto dello sweep degenere: metriche NaN",
            extra={"sigma": sigma, "reason": exc.message}
        )
        metrics = _degenerate_metrics()
    return SweepPoint(sigma=sigma, metrics=metrics)


# --- GRIGLIE DI SIGMA ---

def _parse_range(text: str) -> List[float]:
    parts = [part.strip() for part in text.split(":")]
    try:
        numbers = [float(part) for part in parts]
    except ValueError as exc:
        raise ConfigError(message="Valore non numerico nella griglia sigma", details={"spec": text}) from exc

    if len(numbers) == 1:
        return numbers
    if len(numbers) != 3:
        raise ConfigError(message="Intervallo atteso nella forma start:stop:step", details={"spec": text})

    start, stop, step = numbers
    if not step > 0:
        raise ConfigError(message="Il passo della griglia deve essere positivo", details={"spec": text})
    if stop < start:
        return []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sigma_grid(preset: str = "figure", spec: Optional[str] = None) -> List[Tuple[float, float, float]]:
    """
    Costruisce la lista di terne sigma da sweepare.

    Args:
        preset: "literal" -> (s, s, s); "figure" -> (1, 1, s)
        spec: "start:stop:step" per il parametro s del preset, oppure tre
              parti separate da virgola (numero o intervallo ciascuna) per
              il prodotto cartesiano esplicito. None = griglia del preset

    Returns:
        Lista di terne, nell'ordine di generazione

    Raises:
        ConfigError: Preset sconosciuto, sintassi errata, griglia vuota o
                     componenti fuori da [-1, 1]

    Example:
        >>> len(sigma_grid("figure"))
        11
        >>> sigma_grid("literal", "0:1:0.5")
        [(0.0, 0.0, 0.0), (0.5, 0.5, 0.5), (1.0, 1.0, 1.0)]
    """
    if preset not in PRESET_GRIDS:
        raise ConfigError(
            message="Preset sconosciuto",
            details={"preset": preset, "allowed": sorted(PRESET_GRIDS)}
        )

    if spec is not None and "," in spec:
        components = [_parse_range(part) for part in spec.split(",")]
        if len(components) != 3:
            raise ConfigError(message="Servono tre componenti separate da virgola", details={"spec": spec})
        grid = list(itertools.product(*components))
    else:
        if spec is None:
            start, stop, step = PRESET_GRIDS[preset]
            values = _parse_range(f"{start}:{stop}:{step}")
        else:
            values = _parse_range(spec)
        if preset == "literal":
            grid = [(s, s, s) for s in values]
        else:
            grid = [(1.0, 1.0, s) for s in values]

    if not grid:
        raise ConfigError(message="Griglia sigma vuota", details={"preset": preset, "spec": spec})
    for triple in grid:
        if not all(-1.0 <= value <= 1.0 for value in triple):
            raise ConfigError(
                message="Componenti di sigma fuori da [-1, 1]",
                details={"sigma": list(triple)}
            )
    return grid


class SyncService:
    """
    Service che orchestra gli sweep di sigma.

    Responsabilità:
    - Distribuire i punti su un pool di processi limitato
    - Restituire i risultati in ordine di input, qualunque sia l'ordine di completamento
    """

    def __init__(self, workers: Optional[int] = None):
        """
        Args:
            workers: Dimensione del pool (None = GLS_WORKERS; 1 = sequenziale)
        """
        self.workers = DEFAULT_WORKERS if workers is None else workers
        if self.workers < 1:
            raise InvalidInputError(message="workers deve essere >= 1", details={"workers": self.workers})

    def sweep_sigma(
        self,
        base: SimConfig,
        sigmas: Sequence[Tuple[float, float, float]],
    ) -> SweepResult:
        """
        Integra e analizza il sistema per ogni sigma richiesto.

        Args:
            base: Configurazione di partenza (sigma viene sostituito)
            sigmas: Terne sigma, ciascuna in [-1, 1]

        Returns:
            SweepResult: Un punto per sigma, in ordine di input

        Raises:
            InvalidInputError: Lista vuota o sigma fuori range
            IntegrationDivergedError: Propagata dal punto che diverge
        """
        if not sigmas:
            raise InvalidInputError(message="Lista sigma vuota")
        tasks = [(base, tuple(SigmaVec.checked(*sigma))) for sigma in sigmas]

        logger.info("Sweep sigma avviato", extra={"points": len(tasks), "workers": self.workers})
        if self.workers == 1 or len(tasks) == 1:
            points = [_run_sweep_point(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=min(self.workers, len(tasks))) as pool:
                points = list(pool.map(_run_sweep_point, tasks))
        return SweepResult(points=points)
