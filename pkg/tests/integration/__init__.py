"""
Test di integrazione - La CLI dall'argv agli artefatti su disco.

Verificano parsing, exit code e file scritti in directory temporanee,
con configurazioni INI ridotte.
"""
