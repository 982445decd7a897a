"""Verificação numérica de R-matrizes dinâmicas."""
