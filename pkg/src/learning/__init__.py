# src/learning/__init__.py
"""
Algoritmo natural de aprendizaje, equivalencia de Markov y auditoría de un modelo frente a G0
"""
