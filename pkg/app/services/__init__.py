"""
Service Layer - Logica numerica dell'applicazione.

I service contengono funzioni pure (campi vettoriali, integrazione,
metriche, spettri) e classi che orchestrano i run completi
(StabilityService, SyncService, CommsService).

Ogni modulo è responsabile di un dominio specifico.
"""
