"""Command-line front end.

Term arguments are paths to ``.cccp`` files (the extension may be omitted)
or names of bundled corpus examples.  Unless ``--env`` / ``--alphabet`` are
given, sibling ``.env`` and ``.alpha`` files are used when present; otherwise
the environment is stable and every value named in the term gets length 1.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import corpus
from .bisim import bisimilar
from .channelenv import STABLE, Configuration, EnvError
from .extensional import (
    Deliver, ExtAction, Idle, Input, StateBudgetExceeded, build_lts, default_channels,
    format_lts,
)
from .files import AlphabetError, load_alphabet, load_env
from .harness import (
    EUREKA, congruence_probe, default_contexts, detect_targets, with_probes,
)
from .intensional import Semantics
from .reduction import (
    Tristate, format_trace, instantaneous_bound, trace, trace_graph, well_formed,
)
from .syntax import (
    ActiveRecv, Alphabet, Compose, Delay, Eq, EvalError, Exposed, Fix, FreePVar, FreeVar,
    Lit, Match, Nil, Par, ParseError, PVar, Recv, Restrict, Send, Sum, Tau, Var,
    check_guarded, is_closed, literals, parse_program, parse_term, pretty,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1  # not bisimilar, not well-formed, not detected, distinguished
EXIT_USAGE = 2
EXIT_INPUT = 3  # unreadable or malformed input files
EXIT_BUDGET = 4  # state or search budget exhausted
EXIT_FIXTURE = 5  # corpus fixture mismatch
EXIT_EVAL = 6  # undefined composition reached at run time


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- loading -------------------------------------------------------------------


def resolve(ref: str) -> Path:
    for p in (Path(ref), Path(ref + ".cccp"), corpus.CORPUS / f"{ref}.cccp"):
        if p.is_file():
            return p
    raise CliError(f"cannot find term {ref!r}", EXIT_INPUT)


def load_alphabet_for(path: Path, explicit: str | None) -> Alphabet | None:
    source = Path(explicit) if explicit else path.with_suffix(".alpha")
    if explicit or source.is_file():
        try:
            return load_alphabet(source)
        except (OSError, AlphabetError) as exc:
            raise CliError(f"{source}: {exc}", EXIT_INPUT) from None
    return None


def load_conf(ref: str, args, alphabet: Alphabet | None = None) -> tuple[Configuration, Alphabet]:
    path = resolve(ref)
    if alphabet is None:
        alphabet = load_alphabet_for(path, args.alphabet)
    try:
        term = parse_program(path.read_text(), alphabet)
    except ParseError as exc:
        raise CliError(f"{path}:{exc}", EXIT_INPUT) from None
    if alphabet is None:
        alphabet = Alphabet({v: 1 for v in literals(term)})
    env_path = Path(args.env) if args.env else path.with_suffix(".env")
    try:
        env = load_env(env_path, alphabet) if (args.env or env_path.is_file()) else STABLE
    except (OSError, EnvError) as exc:
        raise CliError(f"{env_path}: {exc}", EXIT_INPUT) from None
    return Configuration(env, term), alphabet


def load_context(ref: str, args, alphabet: Alphabet):
    """A context given as a file or corpus name, or else as inline term text."""
    try:
        path = resolve(ref)
    except CliError:
        try:
            return parse_term(ref, alphabet, allow_reserved=True)
        except ParseError as exc:
            raise CliError(f"context {ref!r}: {exc}", EXIT_INPUT) from None
    try:
        return parse_program(path.read_text(), alphabet, allow_reserved=True)
    except ParseError as exc:
        raise CliError(f"{path}:{exc}", EXIT_INPUT) from None


def channels_arg(args) -> list[str]:
    return [c for c in (args.channels or "").split(",") if c]


def parse_action(text: str) -> ExtAction:
    text = text.strip()
    if m := re.fullmatch(r"gamma\((\w+),\s*(\w+)\)", text):
        return Deliver(m.group(1), m.group(2))
    if m := re.fullmatch(r"iota\((\w+)\)", text):
        return Idle(m.group(1))
    if m := re.fullmatch(r"(\w+)\?(\w+)", text):
        return Input(m.group(1), m.group(2))
    raise CliError(f"cannot read action {text!r}; use c?v, iota(c) or gamma(c,v)", EXIT_USAGE)


# -- output ---------------------------------------------------------------------


def sexpr(t) -> str:
    match t:
        case Lit(v):
            return v
        case Var(i):
            return f"#{i}"
        case FreeVar(n):
            return f"(free {n})"
        case Compose(a, b):
            return f"(compose {sexpr(a)} {sexpr(b)})"
        case Eq(a, b):
            return f"(= {sexpr(a)} {sexpr(b)})"
        case Exposed(c):
            return f"(exp {c})"
        case Nil():
            return "nil"
        case Send(c, e, k):
            return f"(send {c} {sexpr(e)} {sexpr(k)})"
        case Recv(c, body, timeout):
            return f"(recv {c} {sexpr(body)} {sexpr(timeout)})"
        case Delay(k):
            return f"(sigma {sexpr(k)})"
        case Tau(k):
            return f"(tau {sexpr(k)})"
        case Sum(a, b):
            return f"(+ {sexpr(a)} {sexpr(b)})"
        case Match(b, x, y):
            return f"(if {sexpr(b)} {sexpr(x)} {sexpr(y)})"
        case PVar(i):
            return f"X{i}"
        case FreePVar(n):
            return f"(free {n})"
        case Fix(body):
            return f"(fix {sexpr(body)})"
        case ActiveRecv(c, body):
            return f"(active {c} {sexpr(body)})"
        case Par(a, b):
            return f"(| {sexpr(a)} {sexpr(b)})"
        case Restrict(n, v, body):
            return f"(new ({n} {v or '-'}) {sexpr(body)})"
    raise TypeError(t)


def state_row(i: int, conf: Configuration) -> dict:
    return {"id": i, "env": str(conf.env), "term": pretty(conf.term)}


def emit(args, human: str, machine: dict) -> None:
    if args.format == "machine":
        print(json.dumps(machine, sort_keys=True))
    else:
        print(human.rstrip("\n"))


# -- commands -------------------------------------------------------------------


def cmd_parse(args) -> int:
    conf, _ = load_conf(args.term, args)
    emit(args, pretty(conf.term), {"canonical": pretty(conf.term), "ast": sexpr(conf.term),
                                   "env": str(conf.env)})
    return EXIT_OK


def cmd_wf(args) -> int:
    conf, _ = load_conf(args.term, args)
    wf = well_formed(conf)
    unguarded = check_guarded(conf.term)
    closed = is_closed(conf.term)
    ok = wf and unguarded is None and closed
    human = "\n".join([
        f"well-formed: {'yes' if wf else 'no'}",
        f"guarded: {'yes' if unguarded is None else 'no (' + ' > '.join(unguarded) + ')'}",
        f"closed: {'yes' if closed else 'no'}",
    ])
    emit(args, human, {"well_formed": wf, "guarded": unguarded is None, "closed": closed})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_step(args) -> int:
    conf, alphabet = load_conf(args.term, args)
    sem = Semantics(alphabet)
    chans = default_channels([conf], channels_arg(args))
    steps = sorted(sem.next(conf, chans), key=lambda s: (str(s.label), pretty(s.target)))
    lines = [f"-{s.label}-> {pretty(s.target)}" for s in steps]
    emit(args, "\n".join(lines) or "(no transitions)",
         {"steps": [{"label": str(s.label), "target": pretty(s.target)} for s in steps]})
    return EXIT_OK


def cmd_trace(args) -> int:
    conf, alphabet = load_conf(args.term, args)
    sem = Semantics(alphabet)
    depth = args.max_depth if args.max_depth is not None else 10
    root = trace(conf, sem, depth)
    bound = instantaneous_bound(conf, sem, args.max_states)
    states, edges = trace_graph(root)
    human = format_trace(root) + "# longest instantaneous chain: " + (
        str(bound) if bound is not None else "over budget")
    emit(args, human, {
        "states": [state_row(i, c) for i, c in enumerate(states)],
        "edges": [{"from": s, "kind": k, "label": a, "to": t} for s, k, a, t in edges],
        "instantaneous_bound": bound,
    })
    return EXIT_OK


def cmd_lts(args) -> int:
    conf, alphabet = load_conf(args.term, args)
    lts = build_lts(conf, Semantics(alphabet), default_channels([conf], channels_arg(args)),
                    args.max_states)
    emit(args, format_lts(lts), {
        "channels": sorted(lts.channels),
        "states": [state_row(i, c) for i, c in enumerate(lts.states)],
        "edges": [{"from": s, "label": str(a), "to": t} for s, a, t in lts.transitions()],
    })
    return EXIT_OK


def cmd_bisim(args) -> int:
    c1, alphabet = load_conf(args.left, args)
    c2, alphabet2 = load_conf(args.right, args, alphabet if args.alphabet else None)
    if alphabet2 != alphabet:
        raise CliError("the two terms use different alphabets; pass --alphabet", EXIT_INPUT)
    verdict = bisimilar(c1, c2, Semantics(alphabet), channels_arg(args), args.max_states,
                        args.unsound_mode)
    rep = verdict.report()
    human = [f"verdict: {rep['verdict']}"]
    if verdict.distinguisher:
        human.append("distinguisher: " + " ".join(
            f"{s.action}@{s.side}" for s in verdict.distinguisher))
    human.append(f"witness size: {rep['witness_size']}")
    human.append(f"states: {rep['states']['left']} + {rep['states']['right']}")
    if args.unsound_mode:
        human.append(f"mode: {args.unsound_mode} (unsound, for testing only)")
    emit(args, "\n".join(human), rep)
    return EXIT_OK if verdict.bisimilar else EXIT_NEGATIVE


def cmd_detect(args) -> int:
    action = parse_action(args.action)
    conf, alphabet = load_conf(args.term, args)
    sem = Semantics(with_probes(alphabet))
    found = detect_targets(conf, action, sem, args.budget)
    if found is None:
        emit(args, "detected: indeterminate (budget exhausted)",
             {"action": str(action), "detected": Tristate.INDETERMINATE.value})
        return EXIT_BUDGET
    targets = sorted(str(c) for c in found)
    human = f"detected: {'yes' if found else 'no'}" + "".join(f"\n  {t}" for t in targets)
    emit(args, human, {"action": str(action), "detected": bool(found), "targets": targets})
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_probe(args) -> int:
    c1, alphabet = load_conf(args.left, args)
    c2, _ = load_conf(args.right, args, alphabet)
    sem = Semantics(with_probes(alphabet))
    if args.context:
        contexts = []
        for ref in args.context:
            contexts.append(load_context(ref, args, sem.alphabet))
        barbs = channels_arg(args) or sorted(default_channels(
            [Configuration(STABLE, t) for t in contexts]))
    else:
        contexts = default_contexts([c1, c2], sem.alphabet, channels_arg(args))
        barbs = [EUREKA]
    res = congruence_probe(c1, c2, contexts, barbs, sem, args.budget)
    if res.distinguished:
        human = f"distinguished by barb {res.barb} under context {pretty(res.context)}"
    else:
        human = "no distinguishing context found"
    if res.indeterminate:
        human += f"\n({res.indeterminate} checks ran out of budget)"
    emit(args, human, {"distinguished": res.distinguished, "barb": res.barb,
                       "context": pretty(res.context) if res.context is not None else None,
                       "indeterminate": res.indeterminate})
    return EXIT_NEGATIVE if res.distinguished else EXIT_OK


def cmd_examples(args) -> int:
    root = Path(args.corpus) if args.corpus else corpus.CORPUS
    results = corpus.run_manifest(root, args.max_states)
    lines, rows = [], []
    for r in results:
        status = "pass" if r.ok else "FAIL"
        extra = ""
        if r.claim is not None and r.claim != r.observed:
            extra = f" [published claim: {r.claim}; {r.note}]"
        lines.append(f"{status} {r.name}: expected {r.expected}, got {r.observed}{extra}")
        rows.append({"name": r.name, "ok": r.ok, "expected": r.expected,
                     "observed": r.observed, "claim": r.claim})
    failed = sum(not r.ok for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} fixtures pass")
    emit(args, "\n".join(lines), {"fixtures": rows, "failed": failed})
    return EXIT_FIXTURE if failed else EXIT_OK


# -- entry point ---------------------------------------------------------------


def positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help="value alphabet file")
    common.add_argument("--env", help="channel environment file (default: stable)")
    common.add_argument("--channels", help="comma-separated observed channels")
    common.add_argument("--max-states", type=positive, default=100_000)
    common.add_argument("--max-depth", type=positive)
    common.add_argument("--budget", type=positive, default=100_000,
                        help="search budget for detect and probe")
    common.add_argument("--format", choices=["human", "machine"], default="human")

    ap = argparse.ArgumentParser(prog="cccp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *positional):
        p = sub.add_parser(name, parents=[common], help=help_)
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "print the canonical form of a term", "term")
    add("wf", cmd_wf, "check well-formedness, guardedness and closedness", "term")
    add("step", cmd_step, "list the intensional transitions", "term")
    add("trace", cmd_trace, "dump reduction sequences up to --max-depth", "term")
    add("lts", cmd_lts, "dump the reachable extensional LTS", "term")
    b = add("bisim", cmd_bisim, "decide weak bisimilarity", "left", "right")
    b.add_argument("--unsound-mode", choices=["no-gamma", "no-iota"],
                   help="drop one kind of extensional action (testing only)")
    d = add("detect", cmd_detect, "run the test for an extensional action", "term")
    d.add_argument("--action", required=True, help="c?v, iota(c) or gamma(c,v)")
    p = add("probe", cmd_probe, "search for a context separating two terms", "left", "right")
    p.add_argument("--context", action="append", help="context term (repeatable)")
    e = add("examples", cmd_examples, "run the bundled corpus manifest")
    e.add_argument("--corpus", help="corpus directory (default: bundled)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"cccp: {exc}", file=sys.stderr)
        return exc.code
    except StateBudgetExceeded as exc:
        print(f"cccp: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except EvalError as exc:
        print(f"cccp: evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
