"""
Repository Layer - Persistenza degli artefatti.

I repository incapsulano l'accesso al file system, nascondendo formati
e gestione degli errori di I/O ai layer superiori.
"""
