"""
Test unitari - Funzioni numeriche, schemi e repository in isolamento.

Usano run brevi (poche centinaia di passi) e serie sintetiche con seed fisso.
"""
