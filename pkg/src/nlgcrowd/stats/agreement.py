"""Agreement and correlation between two rating streams."""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Hashable, Sequence

from .special import normal_sf, t_sf_two_sided


class ConstantInput(ValueError):
    pass


@dataclass(frozen=True)
class KappaResult:
    """Chance-corrected agreement between two label sequences.

    When both raters always emit the same single label, chance agreement is 1
    and kappa has no value; that case is flagged instead of reported as a
    number.
    """

    kappa: float | None
    observed_agreement: float
    expected_agreement: float
    p_value: float | None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "p": self.p_value,
            "degenerate": self.degenerate,
        }


def cohens_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> KappaResult:
    """Cohen's kappa with a large-sample two-sided p-value against kappa = 0.

    The null standard error comes from the marginal label frequencies
    (Fleiss, Cohen & Everitt), then p = 2 * Phi(-|kappa| / se0).
    """
    if len(a) != len(b):
        raise ValueError("sequences differ in length")
    n = len(a)
    if n == 0:
        raise ValueError("empty sequences")

    categories = sorted(set(a) | set(b), key=repr)
    pa = {c: 0.0 for c in categories}
    pb = {c: 0.0 for c in categories}
    po = 0.0
    for x, y in zip(a, b):
        pa[x] += 1.0 / n
        pb[y] += 1.0 / n
        if x == y:
            po += 1.0 / n
    pe = sum(pa[c] * pb[c] for c in categories)

    if len(set(a)) == 1 and set(a) == set(b):
        return KappaResult(None, po, 1.0, None, degenerate=True)

    kappa = (po - pe) / (1.0 - pe)
    var0 = (pe + pe * pe - sum(pa[c] * pb[c] * (pa[c] + pb[c]) for c in categories)) / (
        n * (1.0 - pe) ** 2
    )
    if var0 <= 0.0:
        p = 1.0 if kappa == 0.0 else 0.0
    else:
        p = 2.0 * normal_sf(abs(kappa) / sqrt(var0))
    return KappaResult(kappa, po, pe, p)


def percentage_agreement(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """Fraction of positions where both sequences carry the same label."""
    if len(a) != len(b):
        raise ValueError("sequences differ in length")
    if not a:
        raise ValueError("empty sequences")
    return sum(1 for x, y in zip(a, b) if x == y) / len(a)


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p_value: float
    n: int

    def to_dict(self) -> dict:
        return {"r": self.r, "p": self.p_value, "n": self.n}


def pearson(x: Sequence[float], y: Sequence[float]) -> PearsonResult:
    """Product-moment correlation with a two-sided t-test p-value."""
    if len(x) != len(y):
        raise ValueError("sequences differ in length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least three pairs")
    mx = sum(x) / n
    my = sum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = sum(v * v for v in dx)
    syy = sum(v * v for v in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantInput("correlation undefined for a constant sequence")
    r = sum(a * b for a, b in zip(dx, dy)) / sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return PearsonResult(r, 0.0, n)
    t = r * sqrt((n - 2) / (1.0 - r * r))
    return PearsonResult(r, t_sf_two_sided(t, n - 2), n)
