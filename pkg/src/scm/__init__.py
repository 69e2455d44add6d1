# src/scm/__init__.py
"""
SCMs discretos con aritmética exacta: distribución conjunta, condiciones sobre el ruido y auditoría
"""
