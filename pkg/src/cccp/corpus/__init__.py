"""Bundled example corpus and its expected-verdict manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..bisim import bisimilar
from ..channelenv import Configuration
from ..files import load_alphabet, load_env, load_term
from ..intensional import Semantics
from ..reduction import well_formed
from ..syntax import Alphabet, check_guarded

CORPUS = Path(__file__).parent


def names() -> list[str]:
    return sorted(p.stem for p in CORPUS.glob("*.cccp"))


def example_paths(name: str, root: Path = CORPUS) -> tuple[Path, Path, Path]:
    return root / f"{name}.cccp", root / f"{name}.env", root / f"{name}.alpha"


def load_example(name: str, root: Path = CORPUS) -> tuple[Configuration, Alphabet]:
    term_path, env_path, alpha_path = example_paths(name, root)
    if not term_path.exists():
        raise FileNotFoundError(f"no example named {name!r}")
    alphabet = load_alphabet(alpha_path)
    env = load_env(env_path if env_path.exists() else None, alphabet)
    return Configuration(env, load_term(term_path, alphabet)), alphabet


def manifest(root: Path = CORPUS) -> list[dict]:
    return json.loads((root / "manifest.json").read_text())


@dataclass
class FixtureResult:
    name: str
    expected: bool
    observed: bool
    detail: str = ""
    claim: bool | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


def run_fixture(entry: dict, root: Path = CORPUS, max_states: int = 100_000) -> FixtureResult:
    kind = entry["check"]
    if kind == "bisim":
        c1, a1 = load_example(entry["left"], root)
        c2, a2 = load_example(entry["right"], root)
        if a1 != a2:
            raise ValueError(f"{entry['name']}: the two sides use different alphabets")
        verdict = bisimilar(c1, c2, Semantics(a1), entry.get("channels", ()),
                            max_states, entry.get("mode"))
        detail = f"states {verdict.states[0]}+{verdict.states[1]}"
        if verdict.distinguisher:
            detail += ", distinguisher " + " ".join(
                f"{s.action}@{s.side}" for s in verdict.distinguisher)
        observed = verdict.bisimilar
    elif kind == "wf":
        conf, _ = load_example(entry["term"], root)
        observed = well_formed(conf) and check_guarded(conf.term) is None
        detail = ""
    else:
        raise ValueError(f"unknown fixture kind {kind!r}")
    return FixtureResult(entry["name"], entry["expect"], observed, detail,
                         entry.get("claim"), entry.get("note", ""))


def run_manifest(root: Path = CORPUS, max_states: int = 100_000) -> list[FixtureResult]:
    return [run_fixture(e, root, max_states) for e in manifest(root)]
