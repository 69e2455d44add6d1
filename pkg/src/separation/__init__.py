# src/separation/__init__.py
"""
m-separación y el modelo inducido por un grafo ancestral
"""
