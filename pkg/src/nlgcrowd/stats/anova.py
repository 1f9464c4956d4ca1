"""Two-way analysis of variance for modality × attribute-count designs.

Effect sums of squares follow the Type II convention (each main effect is
tested against the model containing the other main effect but no interaction),
which is well defined for the unbalanced cell counts a real collection run
produces.  For balanced data the decomposition coincides with the classical
textbook one and the effect sums plus the residual add up to the total.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special import f_survival


class DegenerateDesign(ValueError):
    """A factor has fewer than two levels, or no residual degrees of freedom."""


@dataclass(frozen=True)
class Observation:
    modality: str
    attr_count: int
    response: float


@dataclass(frozen=True)
class ObservationTable:
    rows: tuple[Observation, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("empty observation table")

    @classmethod
    def from_rows(cls, rows: Sequence[tuple[str, int, float]]) -> "ObservationTable":
        return cls(rows=tuple(Observation(m, a, float(r)) for m, a, r in rows))


@dataclass(frozen=True)
class AnovaRow:
    effect: str
    sum_sq: float
    df: int
    f_stat: float | None
    p_value: float | None


@dataclass(frozen=True)
class AnovaTable:
    rows: tuple[AnovaRow, ...]

    def row(self, effect: str) -> AnovaRow:
        for r in self.rows:
            if r.effect == effect:
                return r
        raise KeyError(effect)

    def to_dict(self) -> dict:
        # Non-finite F (zero residual variance) is reported as null in JSON.
        def clean(v: float | None) -> float | None:
            if v is None or v != v or v in (float("inf"), float("-inf")):
                return None
            return v

        return {
            r.effect: {"sum_sq": r.sum_sq, "df": r.df, "F": clean(r.f_stat), "p": r.p_value}
            for r in self.rows
        }


def _dummies(labels: list, levels: list) -> np.ndarray:
    """Treatment-coded dummies, first level dropped."""
    cols = [[1.0 if lab == lev else 0.0 for lab in labels] for lev in levels[1:]]
    if not cols:
        return np.empty((len(labels), 0))
    return np.column_stack(cols)


def _rss_and_rank(x: np.ndarray, y: np.ndarray) -> tuple[float, int]:
    beta, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ beta
    return float(resid @ resid), int(rank)


def two_way_anova(table: ObservationTable) -> AnovaTable:
    """Main effects, interaction and residual for a two-factor layout.

    Raises DegenerateDesign when either factor has a single level or the
    residual has no degrees of freedom left.
    """
    a_labels = [r.modality for r in table.rows]
    b_labels = [r.attr_count for r in table.rows]
    y = np.array([r.response for r in table.rows], dtype=float)
    n = len(y)

    a_levels = sorted(set(a_labels), key=str)
    b_levels = sorted(set(b_labels), key=str)
    if len(a_levels) < 2 or len(b_levels) < 2:
        raise DegenerateDesign("both factors need at least two levels")

    ones = np.ones((n, 1))
    da = _dummies(a_labels, a_levels)
    db = _dummies(b_labels, b_levels)
    dab = np.column_stack(
        [da[:, i] * db[:, j] for i in range(da.shape[1]) for j in range(db.shape[1])]
    )

    x_a = np.hstack([ones, da])
    x_b = np.hstack([ones, db])
    x_ab = np.hstack([ones, da, db])
    x_full = np.hstack([ones, da, db, dab])

    rss_a, rank_a = _rss_and_rank(x_a, y)
    rss_b, rank_b = _rss_and_rank(x_b, y)
    rss_ab, rank_ab = _rss_and_rank(x_ab, y)
    rss_full, rank_full = _rss_and_rank(x_full, y)

    df_resid = n - rank_full
    if df_resid <= 0:
        raise DegenerateDesign("no residual degrees of freedom")

    ss_resid = rss_full
    ms_resid = ss_resid / df_resid

    def effect_row(effect: str, ss: float, df: int) -> AnovaRow:
        ss = max(ss, 0.0)  # guard against lstsq round-off
        if df <= 0:
            raise DegenerateDesign(f"effect {effect} has no degrees of freedom")
        if ms_resid == 0.0:
            f_stat = float("inf") if ss > 0 else 0.0
            p = 0.0 if ss > 0 else 1.0
        else:
            f_stat = (ss / df) / ms_resid
            p = f_survival(f_stat, df, df_resid)
        return AnovaRow(effect, ss, df, f_stat, p)

    rows = (
        effect_row("modality", rss_b - rss_ab, rank_ab - rank_b),
        effect_row("attr_count", rss_a - rss_ab, rank_ab - rank_a),
        effect_row("modality:attr_count", rss_ab - rss_full, rank_full - rank_ab),
        AnovaRow("residual", ss_resid, df_resid, None, None),
    )
    return AnovaTable(rows=rows)


def total_sum_of_squares(table: ObservationTable) -> float:
    y = np.array([r.response for r in table.rows], dtype=float)
    return float(((y - y.mean()) ** 2).sum())
