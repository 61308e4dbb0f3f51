"""
Pacchetto principale di GLS Sync Lab.

Layout organizzato per layer:
- api/: Presentation layer (CLI, comandi, middleware errori, config INI)
- services/: Logica numerica (nucleo GLS, integratore, stabilità,
  sincronizzazione, spettri, comunicazione)
- repositories/: Persistenza degli artefatti su file system
- models/: Domain models (valori immutabili, traiettorie)
- schemas/: Configurazioni e report (Pydantic)
- core/: Configurazione del processo ed eccezioni
- utils/: Utilities condivise
"""

__version__ = "1.0.0"
