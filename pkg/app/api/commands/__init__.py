"""
Comandi della CLI, uno per modulo.

Ogni comando è responsabile SOLO di:
- Caricare la configurazione (app.api.dependencies)
- Delegare il calcolo al Service Layer
- Scrivere gli artefatti tramite ArtifactRepository
- Stampare su stdout i risultati principali

NON contiene logica numerica.
"""
