"""Decoding trained matrices into symbolic rules.

A sweep of filter thresholds turns each matrix row into candidate bodies;
candidates are then scored with the exact precision counter and kept when
they clear the soundness threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .logic import Atom, FactSet, Rule, rule_precision
from .propositional import FeatureSpace

# 0.05 .. 0.95 plus the closed upper endpoint; 0 would admit every feature.
DEFAULT_FILTERS: tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 20)) + (1.0,)

Candidate = tuple[Rule, int, float]


@dataclass(frozen=True)
class ScoredRule:
    rule: Rule
    precision: float
    n_r: int
    n_b: int
    source_row: int
    tau_f: float

    def __str__(self) -> str:
        return f"{self.rule}  % precision={self.precision:.2f} ({self.n_r}/{self.n_b})"


def extract_candidates(
    M_P: np.ndarray,
    features: FeatureSpace,
    filters: Sequence[float] = DEFAULT_FILTERS,
) -> list[Candidate]:
    """One candidate rule per (row, threshold), deduplicated keeping the
    smallest threshold that produced each distinct rule."""
    M_P = np.asarray(M_P, dtype=np.float64)
    valid = features.valid_features
    if M_P.ndim != 2 or M_P.shape[1] != len(valid):
        raise ValueError("matrix width disagrees with the valid feature count")
    if not filters or any(not (0.0 < f <= 1.0) for f in filters):
        raise ValueError("filter thresholds must lie in (0, 1]")
    head = features.target_atom
    found: dict[Rule, Candidate] = {}
    for tau in sorted(set(filters)):
        for k in range(M_P.shape[0]):
            picked = [valid[j] for j in np.flatnonzero(M_P[k] > tau)]
            if not picked or head in picked:
                continue
            rule = Rule(head=head, body=tuple(picked))
            if rule not in found:
                found[rule] = (rule, k, float(tau))
    return list(found.values())


def select_sound(
    candidates: Iterable[Candidate], facts: FactSet, tau_s: float
) -> list[ScoredRule]:
    """Score candidates against the facts and keep those at or above the
    soundness threshold; unmatched bodies never qualify."""
    if not (0.0 <= tau_s <= 1.0):
        raise ValueError("tau_s must lie in [0, 1]")
    scored = []
    for rule, source_row, tau_f in candidates:
        pc = rule_precision(rule, facts)
        if pc.n_b > 0 and pc.value >= tau_s:
            scored.append(
                ScoredRule(
                    rule=rule,
                    precision=pc.value,
                    n_r=pc.n_r,
                    n_b=pc.n_b,
                    source_row=source_row,
                    tau_f=tau_f,
                )
            )
    scored.sort(key=lambda s: (-s.precision, len(s.rule.body), s.rule.sort_key()))
    return scored
