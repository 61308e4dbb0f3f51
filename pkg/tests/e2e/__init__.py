"""
Test end-to-end - Comportamento fisico con le configurazioni di default.

Run lunghi di sincronizzazione, stabilità e comunicazione: sono i test
più lenti della suite.
"""
