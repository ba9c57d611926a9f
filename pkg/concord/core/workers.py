"""
Детерминированный пул потоков для блочной обработки.

Диапазон [0, n_items) делится на непрерывные блоки, результаты возвращаются
в порядке блоков, поэтому итог не зависит от числа потоков.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple, TypeVar

from concord.config import settings

R = TypeVar('R')


def resolve_worker_count(requested: Optional[int] = None) -> int:
    """
    Возвращает число потоков: явный запрос, затем CONCORD_THREADS, затем число ядер.
    """
    workers = requested or settings.THREADS or os.cpu_count() or 1
    return max(1, int(workers))


def partition(n_items: int, chunk_size: int) -> List[Tuple[int, int]]:
    """
    Разбивает диапазон [0, n_items) на непрерывные блоки [start, stop).
    """
    if chunk_size < 1:
        raise ValueError("chunk_size должен быть больше 0")
    return [(start, min(start + chunk_size, n_items)) for start in range(0, n_items, chunk_size)]


def run_partitioned(
    func: Callable[[int, int], R],
    n_items: int,
    chunk_size: int,
    workers: Optional[int] = None,
) -> List[R]:
    """
    Применяет func(start, stop) ко всем блокам диапазона.

    Args:
        func: Функция обработки блока
        n_items: Размер диапазона
        chunk_size: Размер блока
        workers: Число потоков (по умолчанию resolve_worker_count())

    Returns:
        Результаты в порядке блоков
    """
    chunks = partition(n_items, chunk_size)
    n_workers = min(resolve_worker_count(workers), max(1, len(chunks)))
    if n_workers == 1 or len(chunks) <= 1:
        return [func(start, stop) for start, stop in chunks]

    with ThreadPoolExecutor(max_workers=n_workers, thread_name_prefix="concord") as pool:
        # map сохраняет порядок блоков
        return list(pool.map(lambda bounds: func(*bounds), chunks))
