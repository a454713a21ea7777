"""Intensional transition labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Out:
    """Broadcast ``c!v``."""

    chan: str
    value: str

    def __str__(self):
        return f"{self.chan}!{self.value}"


@dataclass(frozen=True)
class In:
    """Reception ``c?v``."""

    chan: str
    value: str

    def __str__(self):
        return f"{self.chan}?{self.value}"


@dataclass(frozen=True)
class Sigma:
    def __str__(self):
        return "sigma"


@dataclass(frozen=True)
class TauLabel:
    def __str__(self):
        return "tau"


SIGMA = Sigma()
TAU = TauLabel()

Label = Union[Out, In, Sigma, TauLabel]
