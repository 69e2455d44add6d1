# src/pipeline/__init__.py
"""
Fixtures de ejemplos resueltos, barridos aleatorios, coordinador de
auditorías y la CLI `workbench`
"""
