"""
Core - Configurazione e infrastruttura centrale.

Contiene:
- config.py: Impostazioni del processo e variabili d'ambiente
- exceptions.py: Eccezioni custom dell'applicazione
"""
