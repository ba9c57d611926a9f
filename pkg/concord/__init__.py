"""
concord - вероятность согласованности (C-индекс) для моделей частоты и тяжести
убытков в страховании, включая масштабируемые приближения.
"""
__version__ = "0.1.0"
