"""Membership-weighted multi-solution readout over backend scores."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UsageError


@dataclass(frozen=True)
class FuzzyReadout:
    """Ranked (candidate, membership) list; memberships sum to 1."""

    candidates: tuple[tuple[object, float], ...]

    def __post_init__(self):
        if not self.candidates:
            raise UsageError("readout needs at least one candidate")
        total = sum(m for _, m in self.candidates)
        if abs(total - 1.0) > 1e-9:
            raise UsageError(f"memberships sum to {total}, not 1")
        prev = None
        for _, m in self.candidates:
            if prev is not None and m > prev + 1e-12:
                raise UsageError("memberships must be descending")
            prev = m

    @property
    def best(self):
        return self.candidates[0][0]


def fuzzy_readout(scores, score_kind: str = "energy", temperature: float = 1.0) -> FuzzyReadout:
    """Softmax memberships over candidate scores.

    Energy scores enter negated (low energy -> high membership); margins
    enter as-is. Membership ties break lexicographically on str(candidate).
    """
    scores = list(scores)
    if not scores:
        raise UsageError("scores must be non-empty")
    if temperature <= 0:
        raise UsageError("temperature must be positive")
    if score_kind not in ("energy", "margin"):
        raise UsageError(f"unknown score kind {score_kind!r}")
    sign = -1.0 if score_kind == "energy" else 1.0
    utilities = []
    for candidate, value in scores:
        value = float(value)
        if not math.isfinite(value):
            raise UsageError(f"score for {candidate!r} is not finite")
        utilities.append((candidate, sign * value / temperature))
    # canonical summation order keeps the result exactly permutation-invariant
    utilities.sort(key=lambda cu: (str(cu[0]), cu[1]))
    top = max(u for _, u in utilities)
    exps = [(candidate, math.exp(u - top)) for candidate, u in utilities]
    norm = sum(e for _, e in exps)
    members = [(candidate, e / norm) for candidate, e in exps]
    members.sort(key=lambda cm: (-cm[1], str(cm[0])))
    return FuzzyReadout(candidates=tuple(members))
