"""
Middleware della CLI.

Include:
- error_handler.py: Gestione centralizzata degli errori ed exit code
"""
