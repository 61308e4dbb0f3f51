"""
Test suite di GLS Sync Lab.
Organizzata per livello (unit, integration, e2e).
"""
