"""
GLS Sync Lab - simulazione di sincronizzazione e anti-sincronizzazione
co-esistenti tra due sistemi di Lorenz generalizzati accoppiati, con
diagnostica di stabilità e pipeline di comunicazione a mascheramento caotico.

Architettura a Layer Organizzata:
- app/api/: Presentation layer (CLI, comandi, middleware errori, config)
- app/services/: Logica numerica (integratore, analisi, spettri)
- app/repositories/: Persistenza degli artefatti (CSV/JSON)
- app/models/: Domain models (parametri, stati, traiettorie)
- app/schemas/: Configurazioni e report (Pydantic)
- app/core/: Configurazione del processo ed eccezioni
- app/utils/: Utilities condivise

Usage:
    python main.py simulate --config experiment.ini --out runs
    python main.py sweep --preset figure
    python main.py comms --case 1 --regime positive
"""
import sys

from app.api.cli import main


if __name__ == "__main__":
    sys.exit(main())
