"""
Utilities - Helper e funzioni condivise.

Contiene utilities riusabili in tutta l'applicazione:
- logger.py: Logging strutturato
- validators.py: Validatori riusabili
"""
