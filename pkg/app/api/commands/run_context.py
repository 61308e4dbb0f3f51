"""
Contesto di esecuzione condiviso dai comandi: directory di run,
cronometro e manifest.
"""
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Optional, Union

from app.api.dependencies import render_config
from app.core.config import APP_VERSION
from app.repositories.artifact_repository import ArtifactRepository
from app.schemas.experiment import ExperimentConfig
from app.schemas.reports import RunManifest
from app.utils.logger import get_logger

logger = get_logger(__name__)


def canonical_text(config_text: str, arguments: Dict[str, Optional[str]]) -> str:
    """Configurazione canonica più gli argomenti che influenzano i dati."""
    lines = [config_text, "[arguments]"]
    lines.extend(f"{key} = {'' if value is None else value}" for key, value in sorted(arguments.items()))
    return "\n".join(lines) + "\n"


class RunContext:
    """
    Gestisce una singola invocazione: crea la directory, registra l'inizio
    e chiude scrivendo config.ini e manifest.json.

    Example:
        >>> context = RunContext("simulate", config, "runs", {})
        >>> context.repository.write_trajectory(traj)
        >>> manifest = context.finish()
    """

    def __init__(
        self,
        command: str,
        config: ExperimentConfig,
        output_dir: Union[str, Path],
        arguments: Optional[Dict[str, Optional[str]]] = None,
    ):
        self.command = command
        self.config_text = render_config(config)
        self.arguments = {key: value for key, value in (arguments or {}).items()}
        self.started_at = datetime.now(timezone.utc)
        self._start = time.perf_counter()
        self.repository = ArtifactRepository.for_run(
            output_dir, command, canonical_text(self.config_text, self.arguments)
        )
        logger.info(
            "Run avviato",
            extra={"command": command, "run_dir": str(self.repository.root)}
        )

    @property
    def run_dir(self) -> Path:
        return self.repository.root

    def finish(self) -> RunManifest:
        """Scrive config.ini e manifest.json e restituisce il manifest."""
        self.repository.write_text("config.ini", self.config_text)
        manifest = RunManifest(
            command=self.command,
            config=self.config_text,
            arguments=self.arguments,
            duration_seconds=time.perf_counter() - self._start,
            version=APP_VERSION,
            started_at=self.started_at,
        )
        self.repository.write_manifest(manifest)
        logger.info(
            "Run completato",
            extra={"command": self.command, "elapsed_seconds": manifest.duration_seconds}
        )
        return manifest.model_copy(update={"artifacts": list(self.repository.artifacts)})
