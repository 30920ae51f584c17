"""In-memory quad store with set semantics, pattern matching, and snapshots.

Single-writer / multiple-reader contract: reads may run concurrently;
callers serialize mutations (the API layer funnels them through one lock).
"""
from __future__ import annotations

from typing import Iterable, Iterator

from .terms import Iri, Quad, Term


class Dataset:
    """A set of quads with (graph), (subject,predicate), (predicate,object) indexes."""

    def __init__(self, quads: Iterable[Quad] = ()):
        self._quads: set[Quad] = set()
        self._by_graph: dict[Iri, set[Quad]] = {}
        self._by_sp: dict[tuple[Term, Term], set[Quad]] = {}
        self._by_po: dict[tuple[Term, Term], set[Quad]] = {}
        for q in quads:
            self.insert(q)

    def __len__(self) -> int:
        return len(self._quads)

    def __contains__(self, q: Quad) -> bool:
        return q in self._quads

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    @property
    def size(self) -> int:
        return len(self._quads)

    def quads(self) -> frozenset[Quad]:
        return frozenset(self._quads)

    def graphs(self) -> list[Iri]:
        return sorted((g for g, qs in self._by_graph.items() if qs), key=lambda g: g.value)

    def insert(self, q: Quad) -> bool:
        """Insert a quad; returns True iff it was not present (set semantics)."""
        if q in self._quads:
            return False
        self._quads.add(q)
        self._by_graph.setdefault(q.graph, set()).add(q)
        self._by_sp.setdefault((q.subject, q.predicate), set()).add(q)
        self._by_po.setdefault((q.predicate, q.object), set()).add(q)
        return True

    def remove(self, q: Quad) -> bool:
        """Remove a quad; returns True iff it was present."""
        if q not in self._quads:
            return False
        self._quads.discard(q)
        self._by_graph[q.graph].discard(q)
        self._by_sp[(q.subject, q.predicate)].discard(q)
        self._by_po[(q.predicate, q.object)].discard(q)
        return True

    def remove_graph(self, g: Iri) -> int:
        doomed = list(self._by_graph.get(g, ()))
        for q in doomed:
            self.remove(q)
        return len(doomed)

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
        graph: Iri | None = None,
    ) -> list[Quad]:
        """All quads matching the bound positions, sorted by canonical serialization."""
        if subject is not None and predicate is not None:
            candidates = self._by_sp.get((subject, predicate), set())
        elif predicate is not None and object is not None:
            candidates = self._by_po.get((predicate, object), set())
        elif graph is not None:
            candidates = self._by_graph.get(graph, set())
        else:
            candidates = self._quads
        out = [
            q
            for q in candidates
            if (subject is None or q.subject == subject)
            and (predicate is None or q.predicate == predicate)
            and (object is None or q.object == object)
            and (graph is None or q.graph == graph)
        ]
        out.sort(key=Quad.nq_line)
        return out

    def has_triple(self, subject: Term, predicate: Term, object: Term) -> bool:
        """True if (s, p, o) is asserted in any graph."""
        for q in self._by_sp.get((subject, predicate), ()):
            if q.object == object:
                return True
        return False

    def triples(self) -> set[tuple[Term, Term, Term]]:
        """The graph-agnostic triple view of the dataset."""
        return {q.triple() for q in self._quads}

    # Snapshot persistence (canonical N-Quads, see rdf_io).

    def save(self, path: str) -> None:
        from . import rdf_io

        text = rdf_io.serialize_nquads(self._quads)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)

    @classmethod
    def load(cls, path: str) -> "Dataset":
        from . import rdf_io

        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        return cls(rdf_io.parse_nquads(text))
