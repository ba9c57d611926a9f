"""
Сервисы уровня приложения: отчеты запусков и бенчмарк движков.
"""
