"""
Repository per gli artefatti di un run della CLI.

Ogni invocazione scrive in una sottodirectory <comando>-<hash> della
directory di output, dove l'hash è lo sha256 della configurazione
canonica. Dentro: file CSV/JSON di dati, config.ini e manifest.json.

Formati:
- CSV con header esatto, una riga per campione, float in repr (round-trip)
- JSON con indentazione 2, float in repr (json.dumps)
"""
import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

import numpy as np

from app.models.trajectory import Trajectory
from app.repositories.base_repository import BaseRepository
from app.schemas.reports import RunManifest
from app.utils.logger import get_logger

logger = get_logger(__name__)

TRAJECTORY_HEADER = ("t", "x1", "x2", "x3", "y1", "y2", "y3", "E1", "E2", "E3")
SWEEP_HEADER = ("s1", "s2", "s3", "pair", "m", "dm", "s_q", "r0", "conv_time")
SPECTRUM_HEADER = ("freq", "power")


def format_value(value: Any) -> str:
    """
    Formatta un valore per il CSV.

    - float (anche numpy): repr, che garantisce il round-trip esatto
    - None: stringa vuota
    - altri: str

    Example:
        >>> format_value(np.float64(0.1))
        '0.1'
    """
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def config_fingerprint(canonical: str) -> str:
    """sha256 esadecimale del testo canonico della configurazione."""
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def trajectory_rows(traj: Trajectory) -> Iterable[Sequence[float]]:
    """Righe t, x, y, E di una traiettoria accoppiata."""
    table = np.column_stack([traj.t, traj.x, traj.y, traj.E])
    return (row for row in table)


class ArtifactRepository(BaseRepository):
    """
    Repository degli artefatti di una singola directory di run.

    Tiene traccia dei file scritti: ognuno compare una sola volta nel
    manifest, anche se riscritto.

    Example:
        >>> repo = ArtifactRepository.for_run("runs", "simulate", canonical_text)
        >>> repo.write_csv("trajectory.csv", TRAJECTORY_HEADER, rows)
    """

    def __init__(self, root: Union[str, Path]):
        super().__init__(root)
        self._ensure_dir(self.root)
        self.artifacts: List[str] = []

    @classmethod
    def for_run(cls, output_dir: Union[str, Path], command: str, canonical: str) -> "ArtifactRepository":
        """
        Crea il repository per la directory <output_dir>/<command>-<sha256[:12]>.
        """
        run_dir = Path(output_dir) / f"{command}-{config_fingerprint(canonical)[:12]}"
        return cls(run_dir)

    def describe(self) -> str:
        return f"artifacts:{self.root}"

    def _record(self, name: str) -> Path:
        if name not in self.artifacts:
            self.artifacts.append(name)
        path = self._path(name)
        logger.debug("Artefatto scritto", extra={"path": str(path)})
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """
        Scrive un CSV con header esatto.

        Raises:
            ArtifactIOError: Se la scrittura fallisce
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
        self._write_text(self._path(name), buffer.getvalue())
        return self._record(name)

    def write_json(self, name: str, payload: Any) -> Path:
        """Scrive un documento JSON (indentazione 2, newline finale)."""
        text = json.dumps(payload, indent=2, allow_nan=True) + "\n"
        self._write_text(self._path(name), text)
        return self._record(name)

    def write_text(self, name: str, content: str) -> Path:
        self._write_text(self._path(name), content)
        return self._record(name)

    def write_trajectory(self, traj: Trajectory, name: str = "trajectory.csv") -> Path:
        return self.write_csv(name, TRAJECTORY_HEADER, trajectory_rows(traj))

    def write_spectrum(self, freq: np.ndarray, power: np.ndarray, name: str = "spectrum.csv") -> Path:
        return self.write_csv(name, SPECTRUM_HEADER, zip(freq, power))

    def write_manifest(self, manifest: RunManifest) -> Path:
        """
        Scrive manifest.json con l'elenco degli artefatti registrati.

        Il manifest non elenca se stesso.
        """
        payload = manifest.model_copy(update={"artifacts": list(self.artifacts)})
        path = self._path("manifest.json")
        self._write_text(path, payload.model_dump_json(indent=2) + "\n")
        logger.info(
            "Manifest scritto",
            extra={"path": str(path), "artifacts": len(self.artifacts)}
        )
        return path

