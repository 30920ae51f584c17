"""fluentkb: knowledge-base engine for historical manuscripts.

Quad store with named graphs, Turtle/N-Quads IO, a multi-formalism knowledge
resource layer, fluent temporal reasoning with rule saturation, semantic
indexing of transcriptions, and an HTTP API plus CLI on top.
"""

from .kb import Config, KnowledgeBase
from .store import Dataset
from .terms import Iri, Literal, Quad, SkolemNode, TermError

__all__ = [
    "Config",
    "KnowledgeBase",
    "Dataset",
    "Iri",
    "Literal",
    "Quad",
    "SkolemNode",
    "TermError",
]
