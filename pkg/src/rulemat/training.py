"""Training orchestration: episodic descent, periodic rule extraction,
the prior matrix feedback loop, and early stopping on coverage.

Training runs in short episodes.  Every curriculum_every epochs the
current matrices are harvested for sound rules, and unless the harvest
completes coverage of the training positives the tensors and optimizer
are reinitialized from a continuing random stream while the accumulated
prior matrix carries over.  Gradient descent on these losses goes static
quickly, so one long run only ever yields the rules visible at its
single equilibrium; fresh starts keep sampling new descent paths, and
the prior repulsion term pushes each new episode away from the rows
already banked, so later episodes surface different rules instead of
re-finding the first ones.

Candidate precision is scored against the support of the recorded facts
(every seen atom at weight one).  Probabilistic weights shape the losses
during gradient steps; for symbolic scoring a seen fact is a seen fact,
which keeps ambiguous-data runs from falsifying rule heads that the task
actually recorded.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .engine import (
    HyperParams,
    PriorMatrix,
    RuleTensors,
    feature_embeddings,
    init_opt_state,
    total_loss,
    train_step,
)
from .extraction import DEFAULT_FILTERS, ScoredRule, extract_candidates, select_sound
from .factio import TaskSpec
from .logic import LogicProgram, forward_chain_closure
from .propositional import FeatureSpace, TrainingSet

LOSS_CSV_HEADER = ("epoch", "L_I", "L_S", "L_B", "L_O", "L_F", "L_C", "total")


@dataclass
class TrainReport:
    loss_history: np.ndarray
    sound_rules: list[ScoredRule]
    final_tensors: RuleTensors
    epochs_run: int
    status: str

    def sound_program(self) -> LogicProgram:
        return LogicProgram(rules=tuple(s.rule for s in self.sound_rules))


def subsample_pairs(pairs: TrainingSet, max_pairs: int | None) -> TrainingSet:
    """Deterministic evenly strided subset when the pair budget is exceeded."""
    if max_pairs is None or len(pairs) <= max_pairs:
        return pairs
    if max_pairs < 1:
        raise ValueError("max_pairs must be positive")
    idx = np.unique(np.round(np.linspace(0, len(pairs) - 1, max_pairs)).astype(np.int64))
    return TrainingSet(
        matrix=pairs.matrix[idx],
        targets=pairs.targets[idx],
        counts=pairs.counts[idx],
        substitutions=[pairs.substitutions[i] for i in idx],
    )


def train(
    spec: TaskSpec,
    pairs: TrainingSet,
    features: FeatureSpace,
    hp: HyperParams,
    tau_s: float = 1.0,
    filters: Sequence[float] = DEFAULT_FILTERS,
) -> TrainReport:
    if len(pairs) == 0:
        raise ValueError("no training pairs")
    if not (0.0 <= tau_s <= 1.0):
        raise ValueError("tau_s must lie in [0, 1]")
    pairs = subsample_pairs(pairs, hp.max_pairs)
    embeddings = feature_embeddings(features)
    rng = np.random.default_rng(hp.seed)

    def fresh_tensors() -> RuleTensors:
        # same draw order as init_tensors, so episode one matches it exactly
        return RuleTensors(
            logits_s=rng.normal(0.0, 0.1, size=(hp.m1, features.C)),
            logits_a=rng.normal(0.0, 0.1, size=(hp.m2, hp.n_a, features.C)),
        )

    tensors = fresh_tensors()
    opt = init_opt_state(tensors)
    prior = PriorMatrix.empty(features.C)

    scoring_facts = spec.facts().support()
    chain_base = spec.background.support()
    wanted = set(spec.positives.support_atoms())

    sound: list[ScoredRule] = []
    known = set()
    history: list[np.ndarray] = []
    status = "budget-exhausted"
    epochs_run = 0

    def harvest() -> bool:
        """Extract, score, fold new sound rules into the prior; True when
        the accumulated program already derives every training positive."""
        nonlocal prior
        M = tensors.merged()
        candidates = extract_candidates(M, features, filters)
        fresh_rows = []
        for scored in select_sound(candidates, scoring_facts, tau_s):
            if scored.rule in known:
                continue
            known.add(scored.rule)
            sound.append(scored)
            fresh_rows.append(M[scored.source_row])
        if fresh_rows:
            prior = prior.extended(np.array(fresh_rows))
        if not sound or not wanted:
            return not wanted
        closure = forward_chain_closure(
            LogicProgram(rules=tuple(s.rule for s in sound)), chain_base
        )
        return wanted <= closure

    for epoch in range(1, hp.epochs + 1):
        tensors, opt, vec = train_step(tensors, pairs, embeddings, prior, hp, opt)
        history.append(np.concatenate([vec, [total_loss(vec, hp.theta)]]))
        epochs_run = epoch
        if epoch % hp.curriculum_every == 0:
            if harvest():
                status = "converged"
                break
            if epoch < hp.epochs:
                tensors = fresh_tensors()
                opt = init_opt_state(tensors)
    else:
        # budget spent (or zero epochs): final harvest unless the last
        # epoch already ran one
        if hp.epochs == 0 or hp.epochs % hp.curriculum_every != 0:
            if harvest():
                status = "converged"

    return TrainReport(
        loss_history=np.array(history).reshape(epochs_run, 7),
        sound_rules=sound,
        final_tensors=tensors,
        epochs_run=epochs_run,
        status=status,
    )


def write_loss_csv(history: np.ndarray, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LOSS_CSV_HEADER)
        for epoch, row in enumerate(history, start=1):
            writer.writerow([epoch] + [f"{v:.10g}" for v in row])
