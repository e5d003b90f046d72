"""Command line front end.

Four subcommands cover the whole workflow: ``learn`` runs parsing,
propositionalization, training and rule extraction over fact files and
writes the program plus its run artifacts; ``eval`` scores a stored
program against test facts; ``gen`` materializes one of the bundled
benchmark tasks as fact files; ``noise`` rewrites a task's training
files under the probabilistic or mislabeling protocol.

Runs are reproducible: identical flags and seed rewrite byte-identical
program files, loss logs, and summaries.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from .engine import HyperParams
from .evaluation import (
    accuracy,
    closure_base,
    inject_gaussian_noise,
    inject_label_noise,
    rank_metrics,
)
from .extraction import DEFAULT_FILTERS
from .factio import (
    ParseError,
    load_task,
    parse_program,
    serialize_facts,
    serialize_program,
)
from .logic import forward_chain_closure
from .propositional import SubstitutionSpaceOverflow, enumerate_features, propositionalize
from .tasks import build, task_names
from .training import train, write_loss_csv

_HP_DEFAULTS = HyperParams()


class CliError(Exception):
    """Fatal input problem; the message is printed and the exit code is 1."""


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such file: {p}")
    return p


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_spec_flags(p: argparse.ArgumentParser, training: bool) -> None:
    p.add_argument("--facts", required=True, help="background fact file")
    p.add_argument("--pos", required=True, help="positive example file")
    if training:
        p.add_argument("--neg", help="weighted negative example file (noise runs)")
    p.add_argument("--test-bk", help="test-time background facts")
    p.add_argument("--test-pos", help="held-out positive examples")
    p.add_argument("--test-neg", help="held-out negative examples")
    p.add_argument("--target", required=True, help="head predicate as name/arity, e.g. lt/2")
    p.add_argument("--depth", type=int, default=0, help="existential variable depth")


def _add_hp_flags(p: argparse.ArgumentParser) -> None:
    d = _HP_DEFAULTS
    p.add_argument("--gamma", type=float, default=d.gamma, help="gate steepness")
    p.add_argument("--occ-a", type=float, default=d.occ_a)
    p.add_argument("--occ-b", type=float, default=d.occ_b)
    p.add_argument("--occ-c", type=float, default=d.occ_c)
    p.add_argument("--occ-d", type=float, default=d.occ_d)
    p.add_argument(
        "--theta", type=_floats, default=d.theta, metavar="W1,...,W6",
        help="loss term weights L_I,L_S,L_B,L_O,L_F,L_C",
    )
    p.add_argument("--lr", type=float, default=d.lr)
    p.add_argument("--beta1", type=float, default=d.beta1)
    p.add_argument("--beta2", type=float, default=d.beta2)
    p.add_argument("--eps-adam", type=float, default=d.eps_adam)
    p.add_argument("--epochs", type=int, default=d.epochs)
    p.add_argument("--curriculum-every", type=int, default=d.curriculum_every)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--m1", type=int, default=d.m1, help="rows without existential variables")
    p.add_argument("--m2", type=int, default=d.m2, help="rows with existential variables")
    p.add_argument("--n-a", type=int, default=d.n_a)
    p.add_argument("--max-pairs", type=int, default=d.max_pairs)


def _hyperparams(args) -> HyperParams:
    theta = tuple(args.theta)
    if len(theta) != 6:
        raise CliError(f"--theta needs 6 weights, got {len(theta)}")
    return HyperParams(
        gamma=args.gamma,
        occ_a=args.occ_a, occ_b=args.occ_b, occ_c=args.occ_c, occ_d=args.occ_d,
        theta=theta,
        lr=args.lr, beta1=args.beta1, beta2=args.beta2, eps_adam=args.eps_adam,
        epochs=args.epochs,
        curriculum_every=args.curriculum_every,
        seed=args.seed,
        m1=args.m1, m2=args.m2, n_a=args.n_a,
        max_pairs=args.max_pairs,
    )


def _load_spec(args):
    opt = lambda path: str(_existing(path)) if path else None
    return load_task(
        target=args.target,
        depth=args.depth,
        facts_path=_existing(args.facts),
        positives_path=_existing(args.pos),
        negatives_path=opt(getattr(args, "neg", None)),
        test_background_path=opt(args.test_bk),
        test_positives_path=opt(args.test_pos),
        test_negatives_path=opt(args.test_neg),
    )


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_learn(args) -> int:
    spec = _load_spec(args)
    hp = _hyperparams(args)
    if not (0.0 <= args.tau_s <= 1.0):
        raise CliError("--tau-s must lie in [0, 1]")
    space = enumerate_features(spec.target, spec.depth, spec.facts().predicates())
    pairs, features = propositionalize(spec, space)
    report = train(spec, pairs, features, hp, tau_s=args.tau_s, filters=tuple(args.filters))

    out = _out_dir(args)
    serialize_program(report.sound_rules, out / "program.pl")
    write_loss_csv(report.loss_history, out / "loss.csv")
    summary = {
        "task": f"{spec.target.name}/{spec.target.arity}",
        "C": features.C,
        "S_size": int(pairs.counts.sum()),
        "epochs_run": report.epochs_run,
        "sound_rules": len(report.sound_rules),
    }
    if spec.test_positives.support_atoms():
        summary["accuracy"] = accuracy(report.sound_program(), spec)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    print(f"{report.status}: {len(report.sound_rules)} sound rules after {report.epochs_run} epochs")
    if "accuracy" in summary:
        print(f"accuracy: {summary['accuracy']:.3f}")
    print(f"wrote {out / 'program.pl'}, {out / 'loss.csv'}, {out / 'summary.json'}")
    return 0


def cmd_eval(args) -> int:
    program = parse_program(_existing(args.program))
    spec = _load_spec(args)
    if not spec.test_positives.support_atoms():
        raise CliError("eval needs held-out positives; pass --test-pos")
    acc = accuracy(program, spec)
    print(f"accuracy: {acc:.3f}")

    negatives = spec.test_negatives.support_atoms()
    if negatives:
        closure = forward_chain_closure(program, closure_base(spec))
        hit = sum(1 for a in negatives if a in closure)
        print(f"test negatives derived: {hit}/{len(negatives)}")

    row = {"accuracy": f"{acc:.6g}", "mrr": "", "hits1": "", "hits3": "", "hits10": ""}
    if args.rank or negatives:
        pool = closure_base(spec).union(spec.test_positives.support())
        metrics = rank_metrics(program, pool, spec.test_positives)
        print(
            f"MRR: {metrics.mrr:.4f}  HITS@1: {metrics.hits1:.4f}  "
            f"HITS@3: {metrics.hits3:.4f}  HITS@10: {metrics.hits10:.4f}"
        )
        row.update(
            mrr=f"{metrics.mrr:.6g}", hits1=f"{metrics.hits1:.6g}",
            hits3=f"{metrics.hits3:.6g}", hits10=f"{metrics.hits10:.6g}",
        )

    out = _out_dir(args)
    with open(out / "metrics.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(row))
        writer.writeheader()
        writer.writerow(row)
    print(f"wrote {out / 'metrics.csv'}")
    return 0


def cmd_gen(args) -> int:
    try:
        task = build(args.task)
    except KeyError:
        raise CliError(f"unknown task {args.task!r}; available: {', '.join(task_names())}")
    spec = task.spec
    out = _out_dir(args)
    parts = {
        "bk.pl": spec.background,
        "pos.pl": spec.positives,
        "test_bk.pl": spec.test_background,
        "test_pos.pl": spec.test_positives,
        "test_neg.pl": spec.test_negatives,
    }
    for name, facts in parts.items():
        (out / name).write_text(serialize_facts(facts))
    meta = {
        "name": task.name,
        "target": f"{spec.target.name}/{spec.target.arity}",
        "depth": spec.depth,
        "tau_s": task.tau_s,
        "hp": dataclasses.asdict(task.hp),
    }
    (out / "task.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"wrote {task.name} dataset to {out}")
    return 0


def cmd_noise(args) -> int:
    if (args.sigma is None) == (args.mu is None):
        raise CliError("pass exactly one of --sigma or --mu")
    spec = _load_spec(args)
    if args.sigma is not None:
        noised = inject_gaussian_noise(spec, args.sigma, args.seed)
    else:
        noised = inject_label_noise(spec, args.mu, args.seed)
    out = _out_dir(args)
    (out / "bk.pl").write_text(serialize_facts(noised.background))
    (out / "pos.pl").write_text(serialize_facts(noised.positives))
    written = ["bk.pl", "pos.pl"]
    if noised.negatives.support_atoms():
        (out / "neg.pl").write_text(serialize_facts(noised.negatives))
        written.append("neg.pl")
    kind = f"sigma={args.sigma}" if args.sigma is not None else f"mu={args.mu}"
    print(f"wrote {kind} seed={args.seed} files to {out}: {', '.join(written)}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rulemat",
        description="Learn forward-chained logic programs from relational facts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="train on fact files and write a rule program")
    _add_spec_flags(learn, training=True)
    learn.add_argument("--tau-s", type=float, default=1.0, help="minimum rule precision")
    learn.add_argument(
        "--filters", type=_floats, default=DEFAULT_FILTERS, metavar="T1,T2,...",
        help="rule filter threshold sweep",
    )
    _add_hp_flags(learn)
    learn.add_argument("--out-dir", default=".", help="artifact directory")
    learn.set_defaults(func=cmd_learn)

    ev = sub.add_parser("eval", help="score a stored program on test facts")
    ev.add_argument("--program", required=True, help="rule program file")
    _add_spec_flags(ev, training=False)
    ev.add_argument("--rank", action="store_true", help="also compute MRR and HITS")
    ev.add_argument("--out-dir", default=".", help="artifact directory")
    ev.set_defaults(func=cmd_eval)

    gen = sub.add_parser("gen", help="write a bundled benchmark task as fact files")
    gen.add_argument("task", help="task name; see --help for the catalog")
    gen.add_argument("--out-dir", default=".", help="dataset directory")
    gen.set_defaults(func=cmd_gen)

    noise = sub.add_parser("noise", help="rewrite training files under a noise protocol")
    _add_spec_flags(noise, training=False)
    noise.add_argument("--sigma", type=float, help="gaussian fact-probability noise level")
    noise.add_argument("--mu", type=float, help="label mutation rate in [0, 1]")
    noise.add_argument("--seed", type=int, default=0)
    noise.add_argument("--out-dir", default=".", help="output directory")
    noise.set_defaults(func=cmd_noise)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SubstitutionSpaceOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
