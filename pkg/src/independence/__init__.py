# src/independence/__init__.py
"""
Modelos de independencia sobre bitsets: propiedades 1-9, clausura, estabilidades y relaciones con grafos
"""
