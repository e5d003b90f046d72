"""Reading and writing facts, triples, tasks and rule programs.

Fact files hold one ground atom per line, optionally weighted:

    succ(0,1).
    0.37::lt(3,1).      % weights live in [0,1]
    member(4,[4,3,2,1]).

`%` starts a comment.  Bracketed constants such as [4,3,2,1] are single
tokens, commas inside them do not split arguments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .logic import Atom, Const, FactSet, LogicProgram, Predicate, Rule, Term, Var

_WEIGHT_RE = re.compile(r"^\s*(\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*::\s*(.*)$")
_ATOM_RE = re.compile(r"^\s*([a-z][A-Za-z0-9_]*)\s*\(\s*(.*?)\s*\)\s*$")
_NAME_RE = re.compile(r"^[a-z][A-Za-z0-9_]*$")


class ParseError(ValueError):
    def __init__(self, message: str, origin: str, line_no: int):
        super().__init__(f"{origin}:{line_no}: {message}")
        self.origin = origin
        self.line_no = line_no


def _strip_comment(line: str) -> str:
    pos = line.find("%")
    return line if pos < 0 else line[:pos]


def _split_args(text: str, origin: str, line_no: int) -> list[str]:
    args: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ']'", origin, line_no)
        if ch == "," and depth == 0:
            args.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ParseError("unbalanced '['", origin, line_no)
    args.append("".join(current).strip())
    if any(not a for a in args):
        raise ParseError("empty argument", origin, line_no)
    return args


def _parse_term(token: str, origin: str, line_no: int) -> Term:
    if token[0].isupper():
        return Var(token)
    return Const(token)


def _parse_atom(text: str, origin: str, line_no: int, ground: bool) -> Atom:
    m = _ATOM_RE.match(text)
    if not m:
        raise ParseError(f"expected pred(arg,...), got {text.strip()!r}", origin, line_no)
    name, argtext = m.groups()
    args = tuple(_parse_term(t, origin, line_no) for t in _split_args(argtext, origin, line_no))
    if ground:
        for t in args:
            if t.is_var:
                raise ParseError(
                    f"facts must be ground, {t.label!r} looks like a variable", origin, line_no
                )
    return Atom(Predicate(name, len(args)), args)


def parse_fact_text(text: str, origin: str = "<string>") -> FactSet:
    facts = FactSet()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if not line.endswith("."):
            raise ParseError("missing trailing '.'", origin, line_no)
        line = line[:-1]
        weight = 1.0
        m = _WEIGHT_RE.match(line)
        if m:
            weight = float(m.group(1))
            line = m.group(2)
        if not 0.0 <= weight <= 1.0:
            raise ParseError(f"weight {weight} outside [0, 1]", origin, line_no)
        atom = _parse_atom(line, origin, line_no, ground=True)
        facts.add(atom, weight)
    return facts


def parse_facts(path: str | Path) -> FactSet:
    p = Path(path)
    return parse_fact_text(p.read_text(), origin=str(p))


def serialize_facts(facts: FactSet) -> str:
    lines = []
    for atom, weight in facts.items():
        prefix = "" if weight == 1.0 else f"{weight!r}::"
        lines.append(f"{prefix}{atom}.")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_triples(path: str | Path) -> FactSet:
    """Tab-separated (subject, relation, object) rows as weight-1 binary facts."""
    p = Path(path)
    facts = FactSet()
    for line_no, raw in enumerate(p.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", str(p), line_no)
        s, r, o = (x.strip() for x in parts)
        if not (s and r and o):
            raise ParseError("empty field", str(p), line_no)
        facts.add(Atom(Predicate(r, 2), (Const(s), Const(o))))
    return facts


def serialize_triples(facts: FactSet) -> str:
    lines = []
    for atom, _ in facts.items():
        if atom.predicate.arity != 2:
            raise ValueError(f"triples need binary atoms, got {atom}")
        lines.append(f"{atom.args[0].label}\t{atom.predicate.name}\t{atom.args[1].label}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Rule programs.


def serialize_program(rules, path: str | Path | None = None) -> str:
    """One rule per line with a precision comment when counts are attached.

    Accepts a LogicProgram or an iterable of objects with .rule / .precision
    (extraction output).
    """
    lines = []
    for item in rules:
        if isinstance(item, Rule):
            rule, note = item, ""
        else:
            rule = item.rule
            note = f"  % precision={item.precision:.2f} ({item.n_r}/{item.n_b})"
        lines.append(f"{rule}{note}")
    text = "\n".join(lines) + ("\n" if lines else "")
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_program_text(text: str, origin: str = "<string>") -> LogicProgram:
    rules: list[Rule] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if not line.endswith("."):
            raise ParseError("missing trailing '.'", origin, line_no)
        line = line[:-1]
        if ":-" in line:
            head_text, body_text = line.split(":-", 1)
            body_parts = _split_top_level_atoms(body_text, origin, line_no)
            body = tuple(_parse_atom(b, origin, line_no, ground=False) for b in body_parts)
        else:
            head_text, body = line, ()
        head = _parse_atom(head_text, origin, line_no, ground=False)
        rules.append(Rule(head, body))
    return LogicProgram(tuple(rules))


def _split_top_level_atoms(text: str, origin: str, line_no: int) -> list[str]:
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    tail = "".join(current)
    if tail.strip():
        parts.append(tail)
    if not parts:
        raise ParseError("empty rule body", origin, line_no)
    return parts


def parse_program(path: str | Path) -> LogicProgram:
    p = Path(path)
    return parse_program_text(p.read_text(), origin=str(p))


# ---------------------------------------------------------------------------
# Tasks.


def _empty_factset() -> FactSet:
    return FactSet()


@dataclass
class TaskSpec:
    """A learning task: target predicate, variable depth and its fact sets.

    negatives carries explicitly weighted closed-world complements (only the
    noise protocols populate it).  test_background holds support facts for
    test entities; they stay invisible during training so they cannot distort
    candidate-rule precision.
    """

    target: Predicate
    depth: int
    background: FactSet = field(default_factory=_empty_factset)
    positives: FactSet = field(default_factory=_empty_factset)
    negatives: FactSet = field(default_factory=_empty_factset)
    test_background: FactSet = field(default_factory=_empty_factset)
    test_positives: FactSet = field(default_factory=_empty_factset)
    test_negatives: FactSet = field(default_factory=_empty_factset)

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.target.arity not in (1, 2):
            raise ValueError("target predicate must be unary or binary")
        for name in ("positives", "negatives", "test_positives", "test_negatives"):
            for atom in getattr(self, name).atoms():
                if atom.predicate != self.target:
                    raise ValueError(f"{name} must use the target predicate, got {atom}")

    def facts(self) -> FactSet:
        """Everything the learner sees as true-ish: background plus positives."""
        return self.background.union(self.positives)

    def entities(self) -> list[str]:
        return self.facts().constants()


def load_task(
    target: str,
    depth: int,
    facts_path: str | Path,
    positives_path: str | Path,
    negatives_path: str | Path | None = None,
    test_background_path: str | Path | None = None,
    test_positives_path: str | Path | None = None,
    test_negatives_path: str | Path | None = None,
) -> TaskSpec:
    """Assemble a TaskSpec from files; target is written name/arity."""
    name, _, arity = target.partition("/")
    if not arity or not arity.isdigit() or not _NAME_RE.match(name):
        raise ValueError(f"target must look like pred/2, got {target!r}")
    opt = lambda p: parse_facts(p) if p else FactSet()
    return TaskSpec(
        target=Predicate(name, int(arity)),
        depth=depth,
        background=parse_facts(facts_path),
        positives=parse_facts(positives_path),
        negatives=opt(negatives_path),
        test_background=opt(test_background_path),
        test_positives=opt(test_positives_path),
        test_negatives=opt(test_negatives_path),
    )
