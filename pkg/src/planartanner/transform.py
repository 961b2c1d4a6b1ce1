"""Degree-shrinking and degree-expansion rewrites between a check inverse and its source.

Every step keeps the check graph fixed; the identification map is threaded
through explicitly so that the face each bit lives on never has to be
re-derived from neighbourhoods (two faces may share a corner set).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .checkgraph import CheckGraph, Identification, IdentificationMap, _dual_connected, check_identification
from .errors import ContractViolation, InvalidStep
from .tanner import TannerGraph

DS1 = "DS1"
DS2 = "DS2"
DE = "DE"


@dataclass(frozen=True)
class TransformStep:
    """One rewrite.

    DS1/DS2: ``removed`` is a degree-3 bit, ``added`` the new degree-1/2 bit
    and ``target`` its check (DS1) or check-graph edge id (DS2). DE:
    ``removed`` names the expanded bit and ``faces`` the empty faces it
    consumes; ``x == len(faces)``.
    """

    kind: str
    removed: object
    added: object = None
    target: object = None
    faces: tuple = ()

    @property
    def x(self) -> int:
        return len(self.faces) if self.kind == DE else 0


def _rebuild(h: TannerGraph, nbrs: dict) -> TannerGraph:
    ci = h.check_index
    ordered = {b: sorted(cs, key=lambda c: ci[c]) for b, cs in nbrs.items()}
    return TannerGraph.from_neighborhoods(ordered, h.check_nodes)


def apply_step(h: TannerGraph, step: TransformStep, cg: CheckGraph, ident: Mapping
               ) -> tuple[TannerGraph, IdentificationMap]:
    """Apply one step; returns the new graph and its identification map."""
    if step.removed not in h.bit_index:
        raise InvalidStep(f"bit {step.removed!r} is not in the graph")
    it = ident.get(step.removed)
    nbrs = {b: list(h.neighborhood(b)) for b in h.bit_nodes}
    new_ident = IdentificationMap(ident)
    if step.kind in (DS1, DS2):
        if h.degree(step.removed) != 3 or it is None or it.kind != "face":
            raise InvalidStep("degree shrinking removes a degree-3 bit sitting on a face")
        if step.added is None or step.added in h.bit_index:
            raise InvalidStep(f"added bit {step.added!r} must be new")
        del nbrs[step.removed]
        del new_ident[step.removed]
        if step.kind == DS1:
            if step.target not in h.check_index:
                raise InvalidStep(f"unknown check {step.target!r}")
            nbrs[step.added] = [step.target]
            new_ident[step.added] = Identification("node", step.target)
        else:
            if not isinstance(step.target, int) or not 0 <= step.target < len(cg.edges):
                raise InvalidStep("DS2 target must be a check-graph edge")
            nbrs[step.added] = list(cg.edges[step.target])
            new_ident[step.added] = Identification("edge", step.target)
    elif step.kind == DE:
        if it is None or it.kind != "face" or h.degree(step.removed) != 3:
            raise InvalidStep("expansion applies to a degree-3 bit sitting on a face")
        if not step.faces:
            raise InvalidStep("expansion needs at least one face")
        taken = ident.face_bits() if isinstance(ident, IdentificationMap) else IdentificationMap(ident).face_bits()
        busy = [f for f in step.faces if f in taken]
        if busy:
            raise InvalidStep(f"faces {busy} are occupied")
        faces = tuple(sorted({it.target, *step.faces}))
        if len(faces) != len(step.faces) + 1 or not _dual_connected(cg, faces):
            raise InvalidStep("consumed faces must be distinct and edge-connected to the bit's face")
        corners = cg.vc(faces)
        if len(corners) != len(faces) + 2:
            raise InvalidStep("expanded region would not be a disc")
        nbrs[step.removed] = list(corners)
        new_ident[step.removed] = Identification("faces", faces)
    else:
        raise InvalidStep(f"unknown step kind {step.kind!r}")
    out = _rebuild(h, nbrs)
    check_identification(out, cg, new_ident)
    return out, new_ident


def transform_sequence(g_prime: TannerGraph, g: TannerGraph, cg: CheckGraph,
                       ident_prime: Mapping, ident_g: Mapping) -> list[TransformStep]:
    """Steps carrying the check inverse ``g_prime`` to ``g`` over the shared check graph."""
    if g_prime.check_nodes != g.check_nodes or g_prime.n != g.n:
        raise ContractViolation("graphs do not share check nodes and length")
    if g.bits_of_degree(0):
        raise ContractViolation("degree-0 bits have no place in the check graph")
    face_bit = {}
    for b, it in ident_prime.items():
        if it.kind == "face":
            face_bit[it.target] = b
        elif it.kind in ("faces", "none"):
            raise ContractViolation("check inverse must have degree <= 3")
    if len(face_bit) != len(cg.faces):
        raise ContractViolation("check inverse must hold one bit per face")
    kept = set(g_prime.bit_nodes) - set(face_bit.values())
    dropped = [b for b in g.bit_nodes if g.degree(b) in (1, 2) and b not in kept]
    if any(ident_prime[b] != ident_g[b] for b in kept):
        raise ContractViolation("retained bits must keep their identification")

    used = set()
    high = []
    for b in g.bit_nodes:
        faces = ident_g[b].faces
        used.update(faces)
        if len(faces) > 1:
            high.append((len(faces) - 1, b, faces))
    free = [f for f in range(len(cg.faces)) if f not in used]

    queue = list(dropped)
    steps: list[TransformStep] = []

    def shrink(face):
        if not queue:
            raise ContractViolation("ran out of low-degree bits to restore")
        b = queue.pop(0)
        it = ident_g[b]
        kind = DS1 if it.kind == "node" else DS2
        steps.append(TransformStep(kind, face_bit[face], b, it.target))

    for f in free:
        shrink(f)
    for x, b, faces in sorted(high, key=lambda t: (t[0], g.bit_index[t[1]])):
        anchor, rest = faces[0], faces[1:]
        for f in rest:
            shrink(f)
        steps.append(TransformStep(DE, face_bit[anchor], faces=tuple(rest)))
    if queue:
        raise ContractViolation("some low-degree bits were never restored")
    return steps


def replay(g_prime: TannerGraph, steps, cg: CheckGraph, ident: Mapping
           ) -> tuple[TannerGraph, IdentificationMap]:
    h, it = g_prime, IdentificationMap(ident)
    for s in steps:
        h, it = apply_step(h, s, cg, it)
    return h, it


def neighborhood_profile(g: TannerGraph) -> Counter:
    return Counter(g.neighborhood(b) for b in g.bit_nodes)


def same_up_to_bit_names(a: TannerGraph, b: TannerGraph) -> bool:
    """Equal check nodes and equal multisets of bit neighbourhoods."""
    return a.check_nodes == b.check_nodes and neighborhood_profile(a) == neighborhood_profile(b)
