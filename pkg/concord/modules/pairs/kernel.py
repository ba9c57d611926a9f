"""
Векторизованный подсчет пар для точного перебора и для выборочного алгоритма.

Записи каждой группы сортируются по экспозиции (частота) или по размеру убытка
(тяжесть), чтобы для каждой записи рассматривался только срез кандидатов.
Границы среза берутся с запасом, а допустимость пары проверяется тем же
выражением, что и в скалярной классификации пары.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from concord.core.workers import run_partitioned
from concord.modules.pairs.frames import FrequencyFrame, SeverityFrame
from concord.modules.pairs.schemas import FrequencyContrast, PairCounts

# Запас для границ среза; точная проверка выполняется маской
_SLACK = 1e-9

ROLE_NONE = 0
ROLE_A = 1
ROLE_B = 2


@dataclass(frozen=True)
class DrawCounts:
    """Счетчики пар для каждого выбранного наблюдения (в порядке выбора)"""
    concordant: np.ndarray
    comparable: np.ndarray
    tied: np.ndarray

    @classmethod
    def concat(cls, parts) -> 'DrawCounts':
        parts = list(parts)
        if not parts:
            empty = np.zeros(0, dtype=np.int64)
            return cls(empty, empty.copy(), empty.copy())
        return cls(
            np.concatenate([p.concordant for p in parts]),
            np.concatenate([p.comparable for p in parts]),
            np.concatenate([p.tied for p in parts]),
        )


def contrast_masks(claim_count: np.ndarray, contrast: FrequencyContrast) -> Tuple[np.ndarray, np.ndarray]:
    """Маски групп A и B контраста"""
    a_mask = claim_count == contrast.group_a_count
    b_mask = claim_count >= contrast.group_b_min_count
    return a_mask, b_mask


@dataclass(frozen=True)
class _SortedGroup:
    key: np.ndarray         # экспозиция или размер убытка, по возрастанию
    prediction: np.ndarray
    index: np.ndarray       # исходные номера записей

    @classmethod
    def build(cls, key: np.ndarray, prediction: np.ndarray, mask: Optional[np.ndarray] = None) -> '_SortedGroup':
        index = np.flatnonzero(mask) if mask is not None else np.arange(key.shape[0])
        order = np.argsort(key[index], kind="stable")
        index = index[order]
        return cls(key=key[index], prediction=prediction[index], index=index)

    def __len__(self) -> int:
        return int(self.index.shape[0])


def _split(higher: int, lower: int, total: int, candidate_in_a: bool) -> Tuple[int, int, int]:
    tied = total - higher - lower
    if candidate_in_a:
        return higher, lower, tied
    return lower, higher, tied


class FrequencyPairIndex:
    """
    Индекс пар для контраста частоты с допуском по экспозиции.
    """

    def __init__(self, frame: FrequencyFrame, contrast: FrequencyContrast, exposure_tol: float):
        self.frame = frame
        self.contrast = contrast
        self.exposure_tol = float(exposure_tol)
        a_mask, b_mask = contrast_masks(frame.claim_count, contrast)
        self.role = np.where(a_mask, ROLE_A, np.where(b_mask, ROLE_B, ROLE_NONE)).astype(np.int8)
        self.group_a = _SortedGroup.build(frame.exposure, frame.prediction, a_mask)
        self.group_b = _SortedGroup.build(frame.exposure, frame.prediction, b_mask)

    def _window(self, group: _SortedGroup, low: float, high: float) -> Tuple[int, int]:
        tol = self.exposure_tol
        lo = int(np.searchsorted(group.key, low - tol - _SLACK, side="left"))
        hi = int(np.searchsorted(group.key, high + tol + _SLACK, side="right"))
        return lo, hi

    def exact_counts(self, chunk_size: int, workers: Optional[int] = None) -> PairCounts:
        """
        Полный перебор пар A x B блоками записей группы A.
        """
        a, b, tol = self.group_a, self.group_b, self.exposure_tol
        if len(a) == 0 or len(b) == 0:
            return PairCounts()

        def block(start: int, stop: int) -> PairCounts:
            ea = a.key[start:stop]
            pa = a.prediction[start:stop]
            lo, hi = self._window(b, ea[0], ea[-1])
            if lo >= hi:
                return PairCounts()
            eb = b.key[lo:hi]
            pb = b.prediction[lo:hi]
            admissible = np.abs(eb[None, :] - ea[:, None]) <= tol
            concordant = np.count_nonzero(admissible & (pb[None, :] > pa[:, None]))
            discordant = np.count_nonzero(admissible & (pb[None, :] < pa[:, None]))
            tied = np.count_nonzero(admissible) - concordant - discordant
            return PairCounts.of(concordant, discordant, tied)

        total = PairCounts()
        for part in run_partitioned(block, len(a), chunk_size, workers):
            total = total + part
        return total

    def draw_counts(
        self,
        draws: np.ndarray,
        position: np.ndarray,
        chunk_size: int,
        workers: Optional[int] = None,
    ) -> DrawCounts:
        """
        Счетчики пар для выбранных наблюдений.

        Наблюдение draws[t] сравнивается только с записями, чья позиция в порядке
        выбора больше t: ранее выбранные записи удалены из набора.

        Args:
            draws: Исходные номера выбранных записей в порядке выбора
            position: Позиция каждой записи в порядке выбора
        """
        a, b, tol = self.group_a, self.group_b, self.exposure_tol
        pos_a = position[a.index]
        pos_b = position[b.index]
        exposure = self.frame.exposure
        prediction = self.frame.prediction

        def block(start: int, stop: int) -> DrawCounts:
            size = stop - start
            conc = np.zeros(size, dtype=np.int64)
            comp = np.zeros(size, dtype=np.int64)
            tied = np.zeros(size, dtype=np.int64)
            for offset in range(size):
                t = start + offset
                i = draws[t]
                role = self.role[i]
                if role == ROLE_NONE:
                    continue
                partners, partner_pos = (b, pos_b) if role == ROLE_A else (a, pos_a)
                e_i = exposure[i]
                p_i = prediction[i]
                lo, hi = self._window(partners, e_i, e_i)
                if lo >= hi:
                    continue
                mask = (np.abs(partners.key[lo:hi] - e_i) <= tol) & (partner_pos[lo:hi] > t)
                pm = partners.prediction[lo:hi][mask]
                higher = int(np.count_nonzero(pm > p_i))
                lower = int(np.count_nonzero(pm < p_i))
                c, d, tie = _split(higher, lower, int(pm.shape[0]), role == ROLE_A)
                conc[offset] = c
                comp[offset] = c + d
                tied[offset] = tie
            return DrawCounts(conc, comp, tied)

        return DrawCounts.concat(run_partitioned(block, int(draws.shape[0]), chunk_size, workers))


class SeverityPairIndex:
    """
    Индекс пар для тяжести убытков с порогом v.
    """

    def __init__(self, frame: SeverityFrame, v: float):
        self.frame = frame
        self.v = float(v)
        self.sorted = _SortedGroup.build(frame.claim_size, frame.prediction)

    def _upper_start(self, y: float) -> int:
        s = self.sorted
        bound = y + self.v
        return max(
            int(np.searchsorted(s.key, bound - _SLACK * max(1.0, abs(bound)), side="left")),
            int(np.searchsorted(s.key, y, side="right")),
        )

    def _lower_stop(self, y: float) -> int:
        s = self.sorted
        bound = y - self.v
        return min(
            int(np.searchsorted(s.key, bound + _SLACK * max(1.0, abs(bound)), side="right")),
            int(np.searchsorted(s.key, y, side="left")),
        )

    def exact_counts(self, chunk_size: int, workers: Optional[int] = None) -> PairCounts:
        """
        Полный перебор пар (меньший убыток, больший убыток) блоками.
        """
        s, v = self.sorted, self.v
        n = len(s)
        if n < 2:
            return PairCounts()

        def block(start: int, stop: int) -> PairCounts:
            ys = s.key[start:stop]
            ps = s.prediction[start:stop]
            lo = self._upper_start(ys[0])
            if lo >= n:
                return PairCounts()
            yj = s.key[lo:]
            pj = s.prediction[lo:]
            admissible = (yj[None, :] > ys[:, None]) & ((yj[None, :] - ys[:, None]) >= v)
            concordant = np.count_nonzero(admissible & (pj[None, :] > ps[:, None]))
            discordant = np.count_nonzero(admissible & (pj[None, :] < ps[:, None]))
            tied = np.count_nonzero(admissible) - concordant - discordant
            return PairCounts.of(concordant, discordant, tied)

        total = PairCounts()
        for part in run_partitioned(block, n, chunk_size, workers):
            total = total + part
        return total

    def draw_counts(
        self,
        draws: np.ndarray,
        position: np.ndarray,
        chunk_size: int,
        workers: Optional[int] = None,
    ) -> DrawCounts:
        s, v = self.sorted, self.v
        pos = position[s.index]
        claim_size = self.frame.claim_size
        prediction = self.frame.prediction

        def block(start: int, stop: int) -> DrawCounts:
            size = stop - start
            conc = np.zeros(size, dtype=np.int64)
            comp = np.zeros(size, dtype=np.int64)
            tied = np.zeros(size, dtype=np.int64)
            for offset in range(size):
                t = start + offset
                i = draws[t]
                y_i = claim_size[i]
                p_i = prediction[i]

                # Наблюдение i - меньший убыток пары
                lo = self._upper_start(y_i)
                yj = s.key[lo:]
                mask = (yj > y_i) & ((yj - y_i) >= v) & (pos[lo:] > t)
                upper = s.prediction[lo:][mask]
                c_up = int(np.count_nonzero(upper > p_i))
                d_up = int(np.count_nonzero(upper < p_i))

                # Наблюдение i - больший убыток пары
                hi = self._lower_stop(y_i)
                yj = s.key[:hi]
                mask = (yj < y_i) & ((y_i - yj) >= v) & (pos[:hi] > t)
                lower = s.prediction[:hi][mask]
                c_low = int(np.count_nonzero(lower < p_i))
                d_low = int(np.count_nonzero(lower > p_i))

                c = c_up + c_low
                d = d_up + d_low
                conc[offset] = c
                comp[offset] = c + d
                tied[offset] = upper.shape[0] + lower.shape[0] - c - d
            return DrawCounts(conc, comp, tied)

        return DrawCounts.concat(run_partitioned(block, int(draws.shape[0]), chunk_size, workers))
