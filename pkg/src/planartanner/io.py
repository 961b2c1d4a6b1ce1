"""One-document-per-file JSON format for Tanner graphs and their embeddings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .embedding import Embedding, RotationSystem
from .errors import InvalidArgument
from .tanner import TannerGraph

FORMAT_VERSION = 1


@dataclass
class GraphDocument:
    graph: TannerGraph
    embedding: Optional[Embedding] = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> str:
        g = self.graph
        doc = {
            "format_version": FORMAT_VERSION,
            "bit_nodes": list(g.bit_nodes),
            "check_nodes": list(g.check_nodes),
            "edges": [[b, c] for b, c in g.edges],
            "labels": [[k, v] for k, v in g.labels],
        }
        if self.embedding is not None:
            doc["rotation"] = [[v, list(ds)] for v, ds in self.embedding.rotation.rotation]
        if self.provenance:
            doc["provenance"] = self.provenance
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GraphDocument":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"not a JSON document: {exc}") from None
        if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
            raise InvalidArgument("unsupported or missing format_version")
        try:
            g = TannerGraph(
                tuple(doc["bit_nodes"]),
                tuple(doc["check_nodes"]),
                tuple((b, c) for b, c in doc["edges"]),
                tuple((k, v) for k, v in doc.get("labels", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidArgument):
                raise
            raise InvalidArgument(f"malformed graph document: {exc}") from None
        emb = None
        if "rotation" in doc:
            tails = []
            for b, c in g.edges:
                tails.extend([b, c])
            try:
                rot = RotationSystem(tuple(tails), tuple((v, tuple(ds)) for v, ds in doc["rotation"]))
            except (TypeError, ValueError) as exc:
                if isinstance(exc, InvalidArgument):
                    raise
                raise InvalidArgument(f"malformed rotation: {exc}") from None
            emb = Embedding(rot)
        return cls(g, emb, doc.get("provenance", {}))


def save(path: Union[str, Path], doc: GraphDocument) -> None:
    Path(path).write_text(doc.to_json())


def load(path: Union[str, Path]) -> GraphDocument:
    return GraphDocument.from_json(Path(path).read_text())
