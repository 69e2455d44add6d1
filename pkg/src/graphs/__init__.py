# src/graphs/__init__.py
"""
Grafos mixtos de aristas dirigidas y arcos: ancestralidad, órdenes, proyección latente, E/S y generadores
"""
