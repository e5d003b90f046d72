"""Turns a relational task into feature vectors.

A feature is an atom over the shared variable tuple (X, Y, V1..Vd); the
target atom itself is excluded as a tautology.  Every substitution of the
variable domains yields one candidate pair: the grounded feature weights as
inputs and the grounded target's weight among the positive (or explicitly
weighted negative) examples as the label.  Examination then drops pairs with
all-zero inputs, prunes feature columns that never fire, and collapses
duplicate pairs while keeping their multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .factio import TaskSpec
from .logic import Atom, Predicate, Var

DEFAULT_SUBSTITUTION_CAP = 50_000_000

# Cap on floats materialized per generation chunk.
_CHUNK_ELEMENTS = 8_000_000


class SubstitutionSpaceOverflow(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(
            f"substitution space has {size} entries, over the cap of {cap}; "
            "lower the variable depth or learn on a smaller fact set"
        )
        self.size = size
        self.cap = cap


@dataclass(eq=False)
class FeatureSpace:
    """Canonically ordered feature atoms plus a validity mask over them."""

    target_atom: Atom
    variables: tuple[str, ...]
    features: tuple[Atom, ...]
    valid_mask: np.ndarray

    @property
    def head_variables(self) -> tuple[str, ...]:
        return self.variables[: self.target_atom.predicate.arity]

    @property
    def existential_variables(self) -> tuple[str, ...]:
        return self.variables[self.target_atom.predicate.arity :]

    @property
    def valid_features(self) -> tuple[Atom, ...]:
        return tuple(f for f, ok in zip(self.features, self.valid_mask) if ok)

    @property
    def C(self) -> int:
        return int(self.valid_mask.sum())

    def restrict(self, alive_among_valid: np.ndarray) -> "FeatureSpace":
        """New space whose valid features are filtered by the given mask."""
        mask = self.valid_mask.copy()
        mask[mask] = alive_among_valid
        return FeatureSpace(self.target_atom, self.variables, self.features, mask)


def expected_feature_count(n_vars: int, n_binary: int, n_unary: int) -> int:
    """Arrangements of variable pairs for binary predicates, single slots for
    unary ones, minus the excluded target atom."""
    return n_vars * (n_vars - 1) * n_binary + n_vars * n_unary - 1


def enumerate_features(
    target: Predicate, depth: int, predicates: Iterable[Predicate]
) -> FeatureSpace:
    if target.arity not in (1, 2):
        raise ValueError(f"target arity must be 1 or 2, got {target}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    variables = ("X", "Y") + tuple(f"V{i}" for i in range(1, depth + 1))
    pool = set(predicates) | {target}
    for p in pool:
        if p.arity not in (1, 2):
            raise ValueError(f"only unary and binary predicates are supported, got {p}")
    # Non-target predicates in sorted order; the target's own block last.
    ordered = sorted((p for p in pool if p != target), key=lambda p: (p.name, p.arity))
    ordered.append(target)
    target_atom = Atom(target, tuple(Var(v) for v in variables[: target.arity]))
    features: list[Atom] = []
    for pred in ordered:
        if pred.arity == 2:
            for i, u in enumerate(variables):
                for j, w in enumerate(variables):
                    if i == j:
                        continue
                    a = Atom(pred, (Var(u), Var(w)))
                    if a != target_atom:
                        features.append(a)
        else:
            for u in variables:
                a = Atom(pred, (Var(u),))
                if a != target_atom:
                    features.append(a)
    space = FeatureSpace(
        target_atom=target_atom,
        variables=variables,
        features=tuple(features),
        valid_mask=np.ones(len(features), dtype=bool),
    )
    assert len(features) == expected_feature_count(
        len(variables),
        sum(1 for p in pool if p.arity == 2),
        sum(1 for p in pool if p.arity == 1),
    )
    return space


def variable_domains(spec: TaskSpec, features: FeatureSpace) -> list[list[str]]:
    """Per-variable constant domains in the order of features.variables.

    Head-variable domains come from the positive examples' argument
    positions; existential variables range over every entity in the facts.
    """
    if len(spec.positives) == 0:
        raise ValueError("no positive examples, nothing to learn from")
    entities = spec.facts().constants()
    positives = spec.positives.atoms()
    arity = spec.target.arity
    domains: list[list[str]] = []
    for pos_idx in range(arity):
        domains.append(sorted({a.args[pos_idx].label for a in positives}))
    while len(domains) < len(features.variables):
        domains.append(entities)
    return domains


def _substitution_size(domains: Sequence[Sequence[str]]) -> int:
    size = 1
    for d in domains:
        size *= len(d)
    return size


def _weight_table(facts, pred: Predicate, ent_idx: dict[str, int]) -> np.ndarray:
    n = len(ent_idx)
    table = np.zeros((n,) * pred.arity, dtype=np.float64)
    for a, w in facts.items():
        if a.predicate != pred:
            continue
        ix = tuple(ent_idx[t.label] for t in a.args)
        table[ix] = w
    return table


class _Generator:
    """Chunked evaluation of feature columns over the substitution grid."""

    def __init__(self, spec: TaskSpec, features: FeatureSpace, cap: int):
        self.spec = spec
        self.features = features
        self.domains = variable_domains(spec, features)
        self.size = _substitution_size(self.domains)
        if self.size > cap:
            raise SubstitutionSpaceOverflow(self.size, cap)
        facts = spec.facts()
        self.entities = facts.constants()
        ent_idx = {e: i for i, e in enumerate(self.entities)}
        self.dom_idx = [np.array([ent_idx[e] for e in d], dtype=np.int64) for d in self.domains]
        self.sizes = [len(d) for d in self.domains]
        self.strides = []
        for a in range(len(self.sizes)):
            stride = 1
            for s in self.sizes[a + 1 :]:
                stride *= s
            self.strides.append(stride)
        self.valid_idx = np.flatnonzero(features.valid_mask)
        preds = {features.features[j].predicate for j in self.valid_idx}
        self.tables = {p: _weight_table(facts, p, ent_idx) for p in preds}
        # Labels: positive weights win over explicit negative weights.
        # Negatives over entities outside the fact universe can never be a
        # head grounding, so they are skipped rather than indexed.
        label_table = np.zeros((len(ent_idx),) * spec.target.arity, dtype=np.float64)
        for a, w in spec.negatives.items():
            if all(t.label in ent_idx for t in a.args):
                label_table[tuple(ent_idx[t.label] for t in a.args)] = w
        for a, w in spec.positives.items():
            label_table[tuple(ent_idx[t.label] for t in a.args)] = w
        self.label_table = label_table
        self.var_axis = {v: a for a, v in enumerate(features.variables)}

    def axis_entities(self, flat: np.ndarray, axis: int) -> np.ndarray:
        return self.dom_idx[axis][(flat // self.strides[axis]) % self.sizes[axis]]

    def chunk(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        flat = np.arange(start, stop, dtype=np.int64)
        per_var = {v: self.axis_entities(flat, a) for v, a in self.var_axis.items()}
        cols = np.empty((stop - start, len(self.valid_idx)), dtype=np.float64)
        for out_j, j in enumerate(self.valid_idx):
            f = self.features.features[j]
            table = self.tables[f.predicate]
            if f.predicate.arity == 2:
                cols[:, out_j] = table[per_var[f.args[0].label], per_var[f.args[1].label]]
            else:
                cols[:, out_j] = table[per_var[f.args[0].label]]
        head = [per_var[v] for v in self.features.head_variables]
        labels = self.label_table[tuple(head)]
        return cols, labels, flat

    def chunk_bounds(self) -> Iterable[tuple[int, int]]:
        width = max(1, len(self.valid_idx))
        rows = max(1024, _CHUNK_ELEMENTS // width)
        start = 0
        while start < self.size:
            stop = min(self.size, start + rows)
            yield start, stop
            start = stop

    def substitution(self, flat: int) -> tuple[str, ...]:
        out = []
        for axis in range(len(self.sizes)):
            ent = self.dom_idx[axis][(flat // self.strides[axis]) % self.sizes[axis]]
            out.append(self.entities[ent])
        return tuple(out)


def raw_pairs(
    spec: TaskSpec, features: FeatureSpace, cap: int = DEFAULT_SUBSTITUTION_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """Full pre-examination pair matrix: one row per substitution.

    Inspection helper for small tasks; the learning path streams chunks
    through examination instead of materializing this.
    """
    gen = _Generator(spec, features, cap)
    blocks = [gen.chunk(start, stop) for start, stop in gen.chunk_bounds()]
    matrix = np.concatenate([b[0] for b in blocks], axis=0)
    labels = np.concatenate([b[1] for b in blocks])
    return matrix, labels


@dataclass(frozen=True)
class TrainingPair:
    v_i: np.ndarray
    v_o: float
    substitution: tuple[str, ...]
    count: int


class TrainingSet(Sequence):
    """Examined pairs: row matrix, labels, multiplicities, representatives."""

    def __init__(
        self,
        matrix: np.ndarray,
        targets: np.ndarray,
        counts: np.ndarray,
        substitutions: list[tuple[str, ...]],
    ):
        self.matrix = matrix
        self.targets = targets
        self.counts = counts
        self.substitutions = substitutions

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            raise TypeError("slicing not supported")
        return TrainingPair(
            v_i=self.matrix[i],
            v_o=float(self.targets[i]),
            substitution=self.substitutions[i],
            count=int(self.counts[i]),
        )


def propositionalize(
    spec: TaskSpec, features: FeatureSpace, cap: int = DEFAULT_SUBSTITUTION_CAP
) -> tuple[TrainingSet, FeatureSpace]:
    """Generate and examine training pairs; returns them with the feature
    space restricted to columns that fire at least once."""
    gen = _Generator(spec, features, cap)
    kept_rows: list[np.ndarray] = []
    kept_labels: list[np.ndarray] = []
    kept_flat: list[np.ndarray] = []
    for start, stop in gen.chunk_bounds():
        cols, labels, flat = gen.chunk(start, stop)
        alive = (cols != 0.0).any(axis=1)
        if alive.any():
            kept_rows.append(cols[alive])
            kept_labels.append(labels[alive])
            kept_flat.append(flat[alive])
    if not kept_rows:
        empty = FeatureSpace(
            features.target_atom,
            features.variables,
            features.features,
            np.zeros(len(features.features), dtype=bool),
        )
        return TrainingSet(np.zeros((0, 0)), np.zeros(0), np.zeros(0, dtype=np.int64), []), empty

    matrix = np.concatenate(kept_rows, axis=0)
    labels = np.concatenate(kept_labels)
    flat = np.concatenate(kept_flat)

    alive_cols = (matrix != 0.0).any(axis=0)
    matrix = np.ascontiguousarray(matrix[:, alive_cols])
    space = features.restrict(alive_cols)

    # Order-preserving deduplication of (v_i, v_o) rows via a bytes view.
    keyed = np.ascontiguousarray(np.concatenate([matrix, labels[:, None]], axis=1))
    void = keyed.view(np.dtype((np.void, keyed.dtype.itemsize * keyed.shape[1]))).ravel()
    _, first_idx, inverse = np.unique(void, return_index=True, return_inverse=True)
    counts = np.bincount(inverse.ravel())
    order = np.argsort(first_idx, kind="stable")
    reps = first_idx[order]
    subs = [gen.substitution(int(flat[r])) for r in reps]
    return (
        TrainingSet(
            matrix=np.ascontiguousarray(matrix[reps]),
            targets=labels[reps],
            counts=counts[order],
            substitutions=subs,
        ),
        space,
    )
