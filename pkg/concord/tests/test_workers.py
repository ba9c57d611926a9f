import pytest

from concord.core import workers
from concord.core.workers import partition, resolve_worker_count, run_partitioned


class TestPartition:
    """Тесты разбиения диапазона на блоки"""

    @pytest.mark.parametrize("n_items, chunk, expected", [
        (0, 3, []),
        (3, 3, [(0, 3)]),
        (7, 3, [(0, 3), (3, 6), (6, 7)]),
        (2, 5, [(0, 2)]),
    ])
    def test_bounds(self, n_items, chunk, expected):
        assert partition(n_items, chunk) == expected

    def test_invalid_chunk(self):
        with pytest.raises(ValueError):
            partition(10, 0)


class TestRunPartitioned:
    """Тесты пула потоков"""

    def test_results_in_chunk_order(self):
        """Результаты идут в порядке блоков при любом числе потоков"""
        def block(start, stop):
            return list(range(start, stop))

        single = run_partitioned(block, 100, 7, workers=1)
        pooled = run_partitioned(block, 100, 7, workers=4)
        assert pooled == single
        assert sum(pooled, []) == list(range(100))

    def test_explicit_worker_count(self):
        assert resolve_worker_count(3) == 3

    def test_threads_setting(self, monkeypatch):
        monkeypatch.setattr(workers.settings, "THREADS", 2)
        assert resolve_worker_count() == 2
