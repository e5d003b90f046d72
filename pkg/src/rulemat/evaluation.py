"""Test-set metrics and the ambiguous-data protocols.

Accuracy is recall over positive test atoms under forward chaining from the
training facts plus any test-time support facts.  Ranking uses the filtered
protocol in both query directions with mean-rank tie breaking.  Noise
injection rewrites training data only; test sets stay crisp.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .factio import TaskSpec
from .logic import Atom, Const, FactSet, LogicProgram, forward_chain_closure

HITS_LEVELS = (1, 3, 10)


def closure_base(spec: TaskSpec) -> FactSet:
    base = spec.background.union(spec.positives).union(spec.test_background)
    return base.support()


def accuracy(program: LogicProgram, spec: TaskSpec) -> float:
    """Fraction of positive test atoms derivable from the training facts."""
    wanted = spec.test_positives.support_atoms()
    if not wanted:
        raise ValueError("accuracy is undefined without positive test examples")
    closure = forward_chain_closure(program, closure_base(spec))
    covered = sum(1 for a in wanted if a in closure)
    return covered / len(wanted)


# ---------------------------------------------------------------------------
# ranking


@dataclass(frozen=True)
class RankResult:
    query: Atom
    direction: str
    rank: float
    hits: dict[int, bool]


@dataclass(frozen=True)
class RankMetrics:
    mrr: float
    hits1: float
    hits3: float
    hits10: float
    results: tuple[RankResult, ...]


def _rank_of(true_entailed: bool, n_entailed: int, pool_size: int) -> float:
    """Mean rank among ties; entailed candidates precede non-entailed."""
    if true_entailed:
        return (n_entailed + 1) / 2
    return n_entailed + (pool_size - n_entailed + 1) / 2


def rank_metrics(program: LogicProgram, facts: FactSet, test: FactSet) -> RankMetrics:
    for a in test.support_atoms():
        if a.predicate.arity != 2:
            raise ValueError("ranking requires binary test facts")
    entities = sorted(set(facts.constants()) | set(test.constants()))
    closure = forward_chain_closure(program, facts.support())
    known = set(facts.support_atoms()) | set(test.support_atoms())

    results = []
    for query in test.support_atoms():
        pred = query.predicate
        s, o = query.args
        for direction in ("tail", "head"):
            def candidate(label: str) -> Atom:
                if direction == "tail":
                    return Atom(pred, (s, Const(label)))
                return Atom(pred, (Const(label), o))

            true_label = o.label if direction == "tail" else s.label
            pool = [
                e
                for e in entities
                if e == true_label or candidate(e) not in known
            ]
            n_entailed = sum(1 for e in pool if candidate(e) in closure)
            rank = _rank_of(candidate(true_label) in closure, n_entailed, len(pool))
            results.append(
                RankResult(
                    query=query,
                    direction=direction,
                    rank=rank,
                    hits={m: rank <= m for m in HITS_LEVELS},
                )
            )

    ranks = np.array([r.rank for r in results], dtype=np.float64)
    return RankMetrics(
        mrr=float(np.mean(1.0 / ranks)),
        hits1=float(np.mean([r.hits[1] for r in results])),
        hits3=float(np.mean([r.hits[3] for r in results])),
        hits10=float(np.mean([r.hits[10] for r in results])),
        results=tuple(results),
    )


# ---------------------------------------------------------------------------
# noise protocols


def head_pair_grid(spec: TaskSpec) -> list[Atom]:
    """Ground target atoms that pair generation materializes as heads:
    the product of the positive examples' argument domains."""
    positives = spec.positives.atoms()
    domains = [
        sorted({a.args[i].label for a in positives})
        for i in range(spec.target.arity)
    ]
    return [
        Atom(spec.target, tuple(Const(c) for c in combo))
        for combo in product(*domains)
    ]


def target_groundings(spec: TaskSpec) -> list[Atom]:
    """Every ground target atom over the task entities: the closed-world
    universe whose non-positives are the negative examples."""
    entities = spec.entities()
    return [
        Atom(spec.target, tuple(Const(c) for c in combo))
        for combo in product(entities, repeat=spec.target.arity)
    ]


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def inject_gaussian_noise(spec: TaskSpec, sigma: float, seed: int) -> TaskSpec:
    """Reweight every training fact with min(1-eps, 1) and every implicit
    negative head with max(eps, 0), eps ~ N(0, sigma^2) per fact."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    background = FactSet()
    for a in spec.background.atoms():
        eps = rng.normal(0.0, sigma) if sigma else 0.0
        background.add(a, _clamp01(min(1.0 - eps, 1.0)))
    positives = FactSet()
    for a in spec.positives.atoms():
        eps = rng.normal(0.0, sigma) if sigma else 0.0
        positives.add(a, _clamp01(min(1.0 - eps, 1.0)))
    negatives = FactSet()
    pos_support = set(spec.positives.support_atoms())
    for a in head_pair_grid(spec):
        if a in pos_support:
            continue
        eps = rng.normal(0.0, sigma) if sigma else 0.0
        negatives.add(a, _clamp01(max(eps, 0.0)))
    return TaskSpec(
        target=spec.target,
        depth=spec.depth,
        background=background,
        positives=positives,
        negatives=negatives,
        test_background=spec.test_background.copy(),
        test_positives=spec.test_positives.copy(),
        test_negatives=spec.test_negatives.copy(),
    )


def inject_label_noise(spec: TaskSpec, mu: float, seed: int) -> TaskSpec:
    """Flip the membership of each target grounding with probability mu;
    flipped-off positives vanish, flipped-on negatives join at weight 1.

    Mislabeling ranges over the whole closed-world universe of the target
    predicate, not just the materialized pair grid, so a full flip (mu = 1)
    really is the complemented relation."""
    if not (0.0 <= mu <= 1.0):
        raise ValueError("mu must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pos_support = set(spec.positives.support_atoms())
    positives = FactSet()
    for a in target_groundings(spec):
        flip = bool(rng.random() < mu)
        is_positive = a in pos_support
        if is_positive and not flip:
            positives.add(a, spec.positives.weight(a))
        elif flip and not is_positive:
            positives.add(a, 1.0)
    return TaskSpec(
        target=spec.target,
        depth=spec.depth,
        background=spec.background.copy(),
        positives=positives,
        negatives=FactSet(),
        test_background=spec.test_background.copy(),
        test_positives=spec.test_positives.copy(),
        test_negatives=spec.test_negatives.copy(),
    )
