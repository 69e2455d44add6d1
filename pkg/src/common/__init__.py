# src/common/__init__.py
"""
Errores, veredictos, utilidades de logging/JSON y el reporte de auditoría
"""
