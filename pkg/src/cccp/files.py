"""Reading term, environment and alphabet files."""

from __future__ import annotations

import re
from pathlib import Path

from .channelenv import STABLE, ChannelEnv, parse_env
from .syntax import Alphabet, Term, parse_program

_VALUE = re.compile(r"(value|err)\s+([A-Za-z0-9_']+)\s+delta\s+(\d+)")
_COMPOSE = re.compile(r"compose\s+([A-Za-z0-9_']+)\s+([A-Za-z0-9_']+)\s*=\s*([A-Za-z0-9_']+)")


class AlphabetError(ValueError):
    pass


def parse_alphabet(text: str) -> Alphabet:
    """Read ``value v delta n``, ``err e delta n`` and ``compose a b = c`` lines."""
    deltas: dict[str, int] = {}
    table: dict[tuple[str, str], str] = {}
    err = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _VALUE.fullmatch(line):
            kind, name, delta = m.group(1), m.group(2), int(m.group(3))
            if name in deltas:
                raise AlphabetError(f"line {lineno}: value {name} declared twice")
            if delta < 1:
                raise AlphabetError(f"line {lineno}: delta must be positive")
            if kind == "err":
                if err is not None:
                    raise AlphabetError(f"line {lineno}: second err declaration")
                err = name
            deltas[name] = delta
        elif m := _COMPOSE.fullmatch(line):
            table[(m.group(1), m.group(2))] = m.group(3)
        else:
            raise AlphabetError(f"line {lineno}: cannot read {line!r}")
    err = err or "err"
    for (a, b), c in table.items():
        for v in (a, b, c):
            if v not in deltas and v != err:
                raise AlphabetError(f"compose mentions undeclared value {v}")
    return Alphabet(deltas, table, err)


def format_alphabet(alphabet: Alphabet) -> str:
    lines = [f"value {v} delta {d}" for v, d in sorted(alphabet.deltas.items())
             if v != alphabet.err]
    lines.append(f"err {alphabet.err} delta {alphabet.delta(alphabet.err)}")
    lines += [f"compose {a} {b} = {c}" for (a, b), c in sorted(alphabet.compositions.items())]
    return "\n".join(lines) + "\n"


def load_alphabet(path: str | Path) -> Alphabet:
    return parse_alphabet(Path(path).read_text())


def load_env(path: str | Path | None, alphabet: Alphabet | None = None) -> ChannelEnv:
    if path is None:
        return STABLE
    return parse_env(Path(path).read_text(), alphabet)


def load_term(path: str | Path, alphabet: Alphabet | None = None) -> Term:
    return parse_program(Path(path).read_text(), alphabet)
