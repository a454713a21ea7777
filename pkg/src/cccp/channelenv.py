"""Channel environments: the exposure state of every channel."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .labels import In, Label, Out, Sigma, TauLabel
from .syntax import Alphabet, Term, pretty


class EnvError(ValueError):
    pass


@dataclass(frozen=True)
class ChannelEnv:
    """Finite map from exposed channels to ``(time, value)``.

    Channels not listed are idle: time 0, no value.  Entries are kept sorted
    so that equal environments hash equal.
    """

    entries: tuple[tuple[str, int, str], ...] = ()

    @classmethod
    def of(cls, mapping: dict[str, tuple[int, str | None]] | Iterable = ()) -> "ChannelEnv":
        items = mapping.items() if isinstance(mapping, dict) else mapping
        out = {}
        for chan, (t, v) in items:
            if t < 0:
                raise EnvError(f"negative exposure time for {chan}")
            if t == 0 and v is not None:
                raise EnvError(f"idle channel {chan} cannot carry a value")
            if t > 0:
                if v is None:
                    raise EnvError(f"exposed channel {chan} needs a value")
                out[chan] = (t, v)
        return cls(tuple(sorted((c, t, v) for c, (t, v) in out.items())))

    def as_dict(self) -> dict[str, tuple[int, str]]:
        return {c: (t, v) for c, t, v in self.entries}

    def exposure(self, chan: str) -> tuple[int, str | None]:
        for c, t, v in self.entries:
            if c == chan:
                return t, v
        return 0, None

    def time(self, chan: str) -> int:
        return self.exposure(chan)[0]

    def is_exposed(self, chan: str) -> bool:
        return any(c == chan for c, _, _ in self.entries)

    def is_idle(self, chan: str) -> bool:
        return not self.is_exposed(chan)

    def exposed(self) -> frozenset[str]:
        return frozenset(c for c, _, _ in self.entries)

    def set(self, chan: str, time: int, value: str | None) -> "ChannelEnv":
        """``env[chan -> (time, value)]``."""
        d = self.as_dict()
        d.pop(chan, None)
        if time > 0:
            d[chan] = (time, value)
        return ChannelEnv.of(d)

    def without(self, chans: Iterable[str]) -> "ChannelEnv":
        drop = set(chans)
        return ChannelEnv(tuple(e for e in self.entries if e[0] not in drop))

    def leq(self, other: "ChannelEnv") -> bool:
        """Pointwise order on exposure times."""
        return all(t <= other.time(c) for c, t, _ in self.entries)

    def __str__(self):
        if not self.entries:
            return "{}"
        return "{" + ", ".join(f"{c}=({t},{v})" for c, t, v in self.entries) + "}"


STABLE = ChannelEnv()


def upd(env: ChannelEnv, label: Label, alphabet: Alphabet) -> ChannelEnv:
    """Environment after an action with label ``label``."""
    match label:
        case Sigma():
            return ChannelEnv(tuple((c, t - 1, v) for c, t, v in env.entries if t > 1))
        case Out(c, v) | In(c, v):
            t, _ = env.exposure(c)
            dv = alphabet.delta(v)
            if t == 0:
                return env.set(c, dv, v)
            return env.set(c, max(dv, t), alphabet.err)
        case TauLabel():
            return env
    raise TypeError(label)


_ENV_LINE = re.compile(r"\s*([a-z_#][A-Za-z0-9_']*)\s*=\s*\(\s*(\d+)\s*,\s*([A-Za-z0-9_']+|-)\s*\)\s*")


def parse_env(text: str, alphabet: Alphabet | None = None) -> ChannelEnv:
    """Read ``chan = (time, value)`` lines; ``#`` starts a comment."""
    entries: dict[str, tuple[int, str | None]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _ENV_LINE.fullmatch(line)
        if not m:
            raise EnvError(f"line {lineno}: expected 'chan = (time, value)'")
        chan, t, v = m.group(1), int(m.group(2)), m.group(3)
        if chan in entries:
            raise EnvError(f"line {lineno}: channel {chan} listed twice")
        if (t == 0) != (v == "-"):
            raise EnvError(f"line {lineno}: use (0, -) for idle or (n, v) with n > 0")
        if v != "-" and alphabet is not None and v not in alphabet:
            raise EnvError(f"line {lineno}: unknown value {v!r}")
        entries[chan] = (t, None if v == "-" else v)
    return ChannelEnv.of(entries)


def format_env(env: ChannelEnv) -> str:
    return "".join(f"{c} = ({t}, {v})\n" for c, t, v in env.entries)


@dataclass(frozen=True)
class Configuration:
    """A system term paired with the environment it runs in."""

    env: ChannelEnv
    term: "Term"

    def __str__(self):
        return f"{self.env} |- {pretty(self.term)}"
