"""Datalog-style logic core.

Ground atoms with nonnegative weights form the knowledge the rest of the
package consumes.  Symbolic operations (immediate consequences, closure,
rule precision) treat a weighted fact as true when its weight clears
CRISP_THRESHOLD; the differentiable engine reads the raw weights instead.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator

import numpy as np

CRISP_THRESHOLD = 0.5

# Row entries of an encoded rule are 1/|body|; three of them sum to
# 0.999... in binary floats, so the firing test needs a little slack.
DOT_SLACK = 1e-9


@dataclass(frozen=True, order=True)
class Predicate:
    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, order=True)
class Term:
    kind: str
    label: str

    def __post_init__(self) -> None:
        if self.kind not in ("var", "const"):
            raise ValueError(f"term kind must be 'var' or 'const', got {self.kind!r}")

    @property
    def is_var(self) -> bool:
        return self.kind == "var"


def Var(label: str) -> Term:
    return Term("var", label)


def Const(label: str) -> Term:
    return Term("const", label)


# A substitution maps variable labels to constant terms.
Substitution = Dict[str, Term]


@dataclass(frozen=True)
class Atom:
    predicate: Predicate
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if len(self.args) != self.predicate.arity:
            raise ValueError(
                f"{self.predicate} takes {self.predicate.arity} arguments, got {len(self.args)}"
            )

    @property
    def is_ground(self) -> bool:
        return not any(t.is_var for t in self.args)

    def variables(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.args if t.is_var)

    def sort_key(self) -> tuple:
        return (self.predicate.name, self.predicate.arity, tuple(t.label for t in self.args))

    def __str__(self) -> str:
        return f"{self.predicate.name}({','.join(t.label for t in self.args)})"


def atom(name: str, *labels: str) -> Atom:
    """Ground atom shorthand: atom('succ', '0', '1')."""
    return Atom(Predicate(name, len(labels)), tuple(Const(c) for c in labels))


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Atom, ...]

    def __post_init__(self) -> None:
        # Canonical form: body atoms deduplicated and sorted, so structurally
        # equal rules hash and compare equal.
        canon = tuple(sorted(set(self.body), key=Atom.sort_key))
        object.__setattr__(self, "body", canon)

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for a in (self.head, *self.body):
            for v in a.variables():
                seen.setdefault(v)
        return tuple(seen)

    def sort_key(self) -> tuple:
        return (self.head.sort_key(), tuple(a.sort_key() for a in self.body))

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(a) for a in self.body)}."


@dataclass(frozen=True)
class LogicProgram:
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        seen: dict[Rule, None] = {}
        for r in self.rules:
            seen.setdefault(r)
        object.__setattr__(self, "rules", tuple(seen))

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)


class FactSet:
    """Map from ground atoms to weights in [0, 1]."""

    def __init__(self, entries: Iterable[tuple[Atom, float]] | Dict[Atom, float] | None = None):
        self._entries: dict[Atom, float] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, dict) else entries
            for a, w in items:
                self.add(a, w)

    def add(self, a: Atom, weight: float = 1.0) -> None:
        if not a.is_ground:
            raise ValueError(f"fact must be ground: {a}")
        if not (0.0 <= weight <= 1.0):
            raise ValueError(f"fact weight must be in [0, 1], got {weight!r} for {a}")
        self._entries[a] = float(weight)

    def weight(self, a: Atom) -> float:
        return self._entries.get(a, 0.0)

    def __contains__(self, a: Atom) -> bool:
        return a in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FactSet) and self._entries == other._entries

    def atoms(self) -> list[Atom]:
        return sorted(self._entries, key=Atom.sort_key)

    def items(self) -> list[tuple[Atom, float]]:
        return [(a, self._entries[a]) for a in self.atoms()]

    def crisp_atoms(self) -> frozenset[Atom]:
        return frozenset(a for a, w in self._entries.items() if w >= CRISP_THRESHOLD)

    def support_atoms(self) -> frozenset[Atom]:
        """Every recorded atom regardless of weight."""
        return frozenset(self._entries)

    def support(self) -> "FactSet":
        """Same atoms, all weights forced to 1."""
        return FactSet((a, 1.0) for a in self._entries)

    def union(self, other: "FactSet") -> "FactSet":
        # Overlapping atoms keep the larger weight.
        merged = dict(self._entries)
        for a, w in other._entries.items():
            if w > merged.get(a, -1.0):
                merged[a] = w
        return FactSet(merged)

    def constants(self) -> list[str]:
        labels = {t.label for a in self._entries for t in a.args}
        return sorted(labels)

    def predicates(self) -> set[Predicate]:
        return {a.predicate for a in self._entries}

    def copy(self) -> "FactSet":
        return FactSet(dict(self._entries))


def apply_substitution(x: Atom | Rule, subst: Substitution) -> Atom | Rule:
    """Replace every variable that has a binding; unbound variables stay."""
    if isinstance(x, Rule):
        return Rule(
            head=apply_substitution(x.head, subst),
            body=tuple(apply_substitution(a, subst) for a in x.body),
        )
    new_args = tuple(subst.get(t.label, t) if t.is_var else t for t in x.args)
    return Atom(x.predicate, new_args)


# ---------------------------------------------------------------------------
# Matching machinery shared by the consequence operator and rule precision.


class _FactIndex:
    def __init__(self, facts: Iterable[Atom]):
        self.by_pred: dict[Predicate, list[tuple[str, ...]]] = {}
        self.by_pred_arg: dict[tuple[Predicate, int, str], list[tuple[str, ...]]] = {}
        self.ground: set[Atom] = set()
        for a in facts:
            args = tuple(t.label for t in a.args)
            self.by_pred.setdefault(a.predicate, []).append(args)
            for i, label in enumerate(args):
                self.by_pred_arg.setdefault((a.predicate, i, label), []).append(args)
            self.ground.add(a)

    def candidates(self, a: Atom, bound: Substitution) -> list[tuple[str, ...]]:
        # Prefer the tightest available index: any argument position whose
        # value is already fixed by a constant or a binding.
        for i, t in enumerate(a.args):
            if not t.is_var:
                return self.by_pred_arg.get((a.predicate, i, t.label), [])
            if t.label in bound:
                return self.by_pred_arg.get((a.predicate, i, bound[t.label].label), [])
        return self.by_pred.get(a.predicate, [])


def _extend(a: Atom, fact_args: tuple[str, ...], bound: Substitution) -> Substitution | None:
    out = bound
    copied = False
    for t, label in zip(a.args, fact_args):
        if t.is_var:
            prev = out.get(t.label)
            if prev is None:
                if not copied:
                    out = dict(out)
                    copied = True
                out[t.label] = Const(label)
            elif prev.label != label:
                return None
        elif t.label != label:
            return None
    return out if copied else dict(out)


def _order_atoms(atoms: list[Atom], index: _FactIndex) -> list[Atom]:
    # Start from the atom with the fewest facts, then grow along shared
    # variables so each join step is constrained.
    remaining = sorted(atoms, key=lambda a: (len(index.by_pred.get(a.predicate, [])), a.sort_key()))
    ordered: list[Atom] = []
    seen_vars: set[str] = set()
    while remaining:
        linked = [a for a in remaining if set(a.variables()) & seen_vars]
        nxt = linked[0] if linked else remaining[0]
        remaining.remove(nxt)
        ordered.append(nxt)
        seen_vars.update(nxt.variables())
    return ordered


def _join(atoms: list[Atom], index: _FactIndex) -> list[Substitution]:
    solutions: list[Substitution] = [{}]
    for a in _order_atoms(atoms, index):
        nxt: list[Substitution] = []
        for s in solutions:
            for fact_args in index.candidates(a, s):
                s2 = _extend(a, fact_args, s)
                if s2 is not None:
                    nxt.append(s2)
        if not nxt:
            return []
        solutions = nxt
    return solutions


def _components(body: tuple[Atom, ...]) -> list[list[Atom]]:
    """Group body atoms into connected components by shared variables."""
    groups: list[tuple[set[str], list[Atom]]] = []
    for a in body:
        vs = set(a.variables())
        hit = [g for g in groups if g[0] & vs]
        if not hit:
            groups.append((vs, [a]))
        else:
            base_vars, base_atoms = hit[0]
            base_vars |= vs
            base_atoms.append(a)
            for other_vars, other_atoms in hit[1:]:
                base_vars |= other_vars
                base_atoms.extend(other_atoms)
                groups.remove((other_vars, other_atoms))
    return [atoms_ for _, atoms_ in groups]


def _as_crisp(facts: FactSet | Iterable[Atom]) -> frozenset[Atom]:
    if isinstance(facts, FactSet):
        return facts.crisp_atoms()
    return frozenset(facts)


def _program_constants(program: LogicProgram) -> set[str]:
    out: set[str] = set()
    for r in program:
        for a in (r.head, *r.body):
            out.update(t.label for t in a.args if not t.is_var)
    return out


def tp_symbolic(program: LogicProgram, interp: FactSet | Iterable[Atom]) -> set[Atom]:
    """Immediate consequences: ground heads of rules whose bodies hold in interp.

    Head variables that never occur in the body range over the whole constant
    universe (constants of interp and of the program).
    """
    crisp = _as_crisp(interp)
    index = _FactIndex(crisp)
    universe = sorted({t.label for a in crisp for t in a.args} | _program_constants(program))
    derived: set[Atom] = set()
    for rule in program:
        head_vars = set(rule.head.variables())
        parts = _components(rule.body)
        # Per-component joint assignments projected onto head variables.
        choices: list[list[tuple[tuple[str, ...], tuple[str, ...]]]] = []
        dead = False
        for part in parts:
            sols = _join(part, index)
            if not sols:
                dead = True
                break
            hv = sorted(head_vars & {v for a in part for v in a.variables()})
            if hv:
                projected = {tuple(s[v].label for v in hv) for s in sols}
                choices.append([(tuple(hv), vals) for vals in sorted(projected)])
        if dead:
            continue
        free = sorted(head_vars - {v for part in parts for a in part for v in a.variables()})
        for combo in itertools.product(*choices):
            base: Substitution = {}
            for hv, vals in combo:
                for v, c in zip(hv, vals):
                    base[v] = Const(c)
            for free_vals in itertools.product(universe, repeat=len(free)):
                subst = dict(base)
                for v, c in zip(free, free_vals):
                    subst[v] = Const(c)
                derived.add(apply_substitution(rule.head, subst))
    return derived


def forward_chain_closure(program: LogicProgram, facts: FactSet | Iterable[Atom]) -> frozenset[Atom]:
    """Least fixpoint of repeated consequence application, starting facts included."""
    interp = set(_as_crisp(facts))
    while True:
        fresh = tp_symbolic(program, interp) - interp
        if not fresh:
            return frozenset(interp)
        interp |= fresh


def tp_vectorized(matrix: np.ndarray, v_i: np.ndarray) -> np.ndarray:
    """Threshold consequence on an encoded rule matrix: [1] iff some row fires.

    A row fires when its dot product with the feature values reaches 1
    (within DOT_SLACK), i.e. every body atom of the encoded rule holds.
    """
    m = np.asarray(matrix, dtype=float)
    v = np.asarray(v_i, dtype=float)
    if m.ndim != 2 or v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise ValueError(f"shape mismatch: matrix {m.shape}, v_i {v.shape}")
    fired = bool((m @ v >= 1.0 - DOT_SLACK).any())
    return np.array([1 if fired else 0])


@dataclass(frozen=True)
class PrecisionCount:
    n_r: int
    n_b: int

    @property
    def value(self) -> float:
        return self.n_r / self.n_b if self.n_b else 0.0


def rule_precision(rule: Rule, facts: FactSet | Iterable[Atom]) -> PrecisionCount:
    """Exact precision of a rule over crisp facts.

    Counts total substitutions of all rule variables over the constant
    universe: n_b satisfy every body atom, n_r additionally make the head a
    fact.  Head variables absent from the body are free and multiply n_b by
    the universe size.
    """
    crisp = _as_crisp(facts)
    index = _FactIndex(crisp)
    universe = sorted({t.label for a in crisp for t in a.args})
    head_vars = list(dict.fromkeys(rule.head.variables()))
    body_vars = {v for a in rule.body for v in a.variables()}
    free_head_vars = [v for v in head_vars if v not in body_vars]

    # Independent body components contribute multiplicatively.  Each one is
    # reduced to a counter over its head-variable bindings (a bare total when
    # it constrains no head variable).
    totals: list[int] = []
    head_counters: list[tuple[tuple[str, ...], Counter]] = []
    for part in _components(rule.body):
        sols = _join(part, index)
        if not sols:
            return PrecisionCount(0, 0)
        hv = tuple(sorted(set(v for a in part for v in a.variables()) & set(head_vars)))
        totals.append(len(sols))
        if hv:
            head_counters.append((hv, Counter(tuple(s[v].label for v in hv) for s in sols)))

    n_b = 1
    for t in totals:
        n_b *= t
    n_b *= len(universe) ** len(free_head_vars)
    if n_b == 0:
        return PrecisionCount(0, 0)

    # n_r walks the head predicate's facts and weighs each by the number of
    # body solutions consistent with it.  Components that touch no head
    # variable contribute a constant factor.
    no_head_scale = 1
    for t, part in zip(totals, _components(rule.body)):
        if not (set(v for a in part for v in a.variables()) & set(head_vars)):
            no_head_scale *= t

    n_r = 0
    for fact in crisp:
        if fact.predicate != rule.head.predicate:
            continue
        binding: dict[str, str] = {}
        ok = True
        for t, c in zip(rule.head.args, fact.args):
            if t.is_var:
                if binding.setdefault(t.label, c.label) != c.label:
                    ok = False
                    break
            elif t.label != c.label:
                ok = False
                break
        if not ok:
            continue
        count = no_head_scale
        for hv, counter in head_counters:
            count *= counter.get(tuple(binding[v] for v in hv), 0)
            if count == 0:
                break
        n_r += count
    return PrecisionCount(n_r, n_b)
