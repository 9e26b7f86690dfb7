"""Run configuration, read from the JSON file named by ``TURINGTEST_CONFIG``."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .core import Alphabet

ENV_VAR = "TURINGTEST_CONFIG"


@dataclass(frozen=True)
class Config:
    symbols: tuple[str, ...] = ("a", "b")
    blank: str = "_"
    budget: int = 10_000            # cycles per question for plain machines
    step_cap: int = 1000            # test steps per orientation
    pi_budget: int = 10_000         # simulation budget behind the recognition oracle
    pi_certify_limit: int = 100_000
    comm_search_cap: int = 1000
    prob_step_cap: int = 500
    mem_max_classes: int = 2_000_000
    seed: int = 0

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(tuple(self.symbols), self.blank)

    def to_json(self) -> dict:
        d = asdict(self)
        d["symbols"] = list(self.symbols)
        return d

    @property
    def hash(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def override(self, **kw) -> "Config":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def load_config(path: str | Path | None = None) -> Config:
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return Config()
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "symbols" in data:
        data["symbols"] = tuple(data["symbols"])
    return Config(**data)
