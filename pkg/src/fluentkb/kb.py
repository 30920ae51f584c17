"""Knowledge-base facade: one Dataset plus the tunables every service reads."""
from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

from .store import Dataset


def default_stopwords() -> frozenset[str]:
    text = importlib.resources.files("fluentkb.data").joinpath("stopwords_fr.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


@dataclass
class Config:
    alignment_trust: float = 0.8   # correspondences below it are navigation aids only
    score_lambda: float = 0.3      # weight of the temporal factor in association scores
    score_theta: float = 0.35      # association score threshold
    context_window: int = 5        # tokens each side of an occurrence
    round_cap: int = 64            # saturation safety cap; must never trigger on valid input
    stopwords: frozenset[str] = field(default_factory=default_stopwords)


@dataclass
class KnowledgeBase:
    dataset: Dataset = field(default_factory=Dataset)
    config: Config = field(default_factory=Config)

    def save(self, path: str) -> None:
        self.dataset.save(path)

    @classmethod
    def load(cls, path: str, config: Config | None = None) -> "KnowledgeBase":
        return cls(Dataset.load(path), config or Config())
