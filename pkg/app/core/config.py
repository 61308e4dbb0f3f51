"""
Configurazione del processo e caricamento variabili d'ambiente.

Questo modulo centralizza le impostazioni che non fanno parte di un
esperimento (quelle stanno nel file INI letto da app.api.dependencies):
nome e versione, ambiente di esecuzione, directory di output di default,
dimensione del pool di worker e soglie numeriche di sicurezza.

Note:
    - In sviluppo locale le variabili possono essere caricate da .env
      tramite python-dotenv
    - Nessuna impostazione qui influenza i file di dati prodotti, tranne
      GLS_DIVERGENCE_LIMIT (che può solo interrompere un run)
"""
import os

# --- CARICAMENTO VARIABILI D'AMBIENTE (SOLO PER SVILUPPO LOCALE/FALLBACK) ---
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    # Senza python-dotenv si usano solo le variabili già presenti
    pass


# --- CONFIGURAZIONE APPLICAZIONE ---

APP_NAME = os.environ.get("APP_NAME", "GLS Sync Lab")
APP_VERSION = os.environ.get("APP_VERSION", "1.0.0")

# Debug mode: log più verbosi
DEBUG = os.environ.get("DEBUG", "False").lower() in ("true", "1", "yes")

# Ambiente di esecuzione: development, production
ENVIRONMENT = os.environ.get("ENVIRONMENT", "production")


# --- CONFIGURAZIONE RUN ---

# Directory radice in cui ogni invocazione crea la propria sottodirectory
DEFAULT_OUTPUT_DIR = os.environ.get("GLS_OUTPUT_DIR", "runs")

# Worker per sweep e casi di comunicazione (1 = esecuzione sequenziale)
DEFAULT_WORKERS = int(os.environ.get("GLS_WORKERS", "1"))


# --- SOGLIE NUMERICHE ---

# Sentinella di divergenza: |componente| oltre questo valore interrompe il run
DIVERGENCE_LIMIT = float(os.environ.get("GLS_DIVERGENCE_LIMIT", "1e6"))

# Numero massimo di valutazioni per il fit sinusoidale
FIT_MAX_NFEV = int(os.environ.get("GLS_FIT_MAX_NFEV", "2000"))

if DIVERGENCE_LIMIT <= 0:
    raise RuntimeError(
        f"GLS_DIVERGENCE_LIMIT deve essere positivo (attuale: {DIVERGENCE_LIMIT})."
    )

if DEFAULT_WORKERS < 1:
    raise RuntimeError(
        f"GLS_WORKERS deve essere almeno 1 (attuale: {DEFAULT_WORKERS})."
    )
