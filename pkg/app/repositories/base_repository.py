"""
Base Repository - Classe astratta per la persistenza su file system.

Fornisce le utility condivise dai repository concreti: risoluzione dei
path sotto una radice, creazione delle directory e conversione degli
errori del sistema operativo in ArtifactIOError.

Design Pattern: Repository Pattern + Template Method
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Union

from app.core.exceptions import ArtifactIOError
from app.utils.logger import get_logger

logger = get_logger(__name__)


class BaseRepository(ABC):
    """
    Repository base astratto legato a una directory radice.

    I repository concreti implementano describe(), che identifica il
    repository nei log di errore, e usano _write_text
    per ogni scrittura su disco, così ogni OSError diventa un
    ArtifactIOError con il path coinvolto.

    Note:
        - Questa è una classe astratta, non può essere istanziata direttamente
        - Le scritture sono sempre in UTF-8 con terminatori "\\n"
    """

    def __init__(self, root: Union[str, Path]):
        """
        Args:
            root: Directory radice del repository
        """
        self.root = Path(root)

    @abstractmethod
    def describe(self) -> str:
        """Descrizione breve del repository (campo "repository" dei log)."""

    def _path(self, name: str) -> Path:
        return self.root / name

    def _ensure_dir(self, path: Path) -> Path:
        """
        Crea la directory se non esiste.

        Raises:
            ArtifactIOError: Se la creazione fallisce
        """
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            logger.error(
                "Creazione directory fallita",
                extra={"repository": self.describe(), "path": str(path)}
            )
            raise ArtifactIOError(
                message="Impossibile creare la directory",
                details={"path": str(path), "reason": str(exc)}
            ) from exc
        return path

    def _write_text(self, path: Path, content: str) -> Path:
        """
        Scrive un file di testo.

        Raises:
            ArtifactIOError: Se la scrittura fallisce
        """
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(content)
        except OSError as exc:
            logger.error(
                "Scrittura artefatto fallita",
                extra={"repository": self.describe(), "path": str(path)}
            )
            raise ArtifactIOError(
                message="Impossibile scrivere il file",
                details={"path": str(path), "reason": str(exc)}
            ) from exc
        return path

