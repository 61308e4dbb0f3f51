"""
API Layer - Presentation Layer dell'applicazione.

Contiene:
- cli.py: Parser argparse e registrazione dei sottocomandi
- commands/: Un modulo per sottocomando
- middleware/: Traduzione eccezioni -> exit code
- dependencies.py: Caricamento e validazione della configurazione INI
"""
