"""Distance bounds for planar Tanner graphs from codeword-supporting check sets.

All rate-dependent quantities use :class:`fractions.Fraction`; the ceiling
boundaries of the bound formula are exact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import gf2
from .checkgraph import CheckGraph, IdentificationMap, _validate_tanner_embedding, build_check_graph, tanner_embedding
from .dual import (
    DualGraph,
    all_realizations,
    build_dual,
    connected_subsets,
    detect_multi_edges,
    find_singular_nodes,
    find_singular_patterns,
    girth,
    recurrence_table,
    tree_params,
)
from .embedding import Embedding
from .errors import ContractViolation, GirthError, UnsupportedRate
from .tanner import BitVector, TannerGraph, extract_low_weight_codeword, induced_mask, is_codeword
from .transform import DS1, DS2, TransformStep, apply_step

CERTIFIED_MIN_RATE = Fraction(9, 16)
PRELUDE_MIN_RATE = Fraction(7, 8)


def p_of_rate(R) -> int:
    R = Fraction(R)
    if R <= Fraction(1, 2):
        raise UnsupportedRate(f"rate {R} must exceed 1/2")
    return max(0, math.ceil((7 - 8 * R) / (2 * (2 * R - 1))))


def bound_of_rate(R) -> int:
    return p_of_rate(R) + 3


def theta(p: int) -> int:
    """``(4/3 p + 2/3) t(p)``: realizations meeting either end of a dual edge."""
    t = tree_params(p).t
    val = (Fraction(4, 3) * p + Fraction(2, 3)) * t
    if val.denominator != 1:
        raise ContractViolation(f"theta({p}) = {val} is not an integer")
    return int(val)


def delta(p: int) -> Fraction:
    t = tree_params(p).t
    return Fraction(p * t, 3) + Fraction(2 * t, 3)


def alpha1_bound(p: int) -> Fraction:
    return (Fraction(2, 3) * p - Fraction(2, 3)) * tree_params(p).t


def alpha2_bound(p: int) -> Fraction:
    tp = tree_params(p)
    return (Fraction(p, 2) - Fraction(tp.z, 6) - 1) * tp.t


def delta_de_bound(p: int, x: int) -> Fraction:
    """Lower bound on the growth of the realization weight sum under DE(x)."""
    tp = tree_params(p)
    # only positivity of alpha is used beyond x = 2
    alpha = {1: alpha1_bound(p), 2: alpha2_bound(p)}.get(x, Fraction(0))
    return x * delta(p) - p * tp.t + alpha


def x_term(n: int, m: int, p: int) -> Fraction:
    t = tree_params(p).t
    F = 2 * m - 4
    return (Fraction(4, 3) * p * n + Fraction(2, 3) * n - Fraction(4, 3) * p * F - Fraction(8, 3) * F) * t


@dataclass
class Context:
    """Everything derived from a planar Tanner graph once."""

    g: TannerGraph
    emb: Embedding
    cg: CheckGraph
    ident: IdentificationMap
    dual: DualGraph

    @property
    def occupancy(self):
        return self.ident.occupancy()


def make_context(g: TannerGraph, emb: Optional[Embedding] = None) -> Context:
    if emb is None:
        emb = tanner_embedding(g)
    cg, ident, _ = build_check_graph(g, emb)
    return Context(g, emb, cg, ident, build_dual(cg))


def _vc_mask(g: TannerGraph, cg: CheckGraph, faces: Iterable[int]) -> tuple[int, int]:
    checks = cg.vc(faces)
    return g.check_mask_of(checks), len(checks)


def realization_weight(g: TannerGraph, cg: CheckGraph, U: Iterable[int]) -> tuple[int, int]:
    """``(W, |V^c_U|)`` for a set of dual vertices."""
    mask, size = _vc_mask(g, cg, U)
    return gf2.popcount(induced_mask(g, mask)), size


@dataclass
class YBreakdown:
    p: int
    t: int
    realizations: int
    W_sum: int
    Vc_sum: int
    cycle_sum: int
    eta1: int
    eta2: int
    eta3: int
    eta_high: int
    eta1_local: int
    eta2_local: int
    eta3_local: int
    eta1_bound: int
    eta2_analytic: int
    eta3_analytic: int
    X: Fraction
    unoccupied_r: int
    occupied_r: int
    s_G: int

    @property
    def Y(self) -> int:
        return self.W_sum - self.Vc_sum

    @property
    def lower_bound(self) -> Fraction:
        return self.X + self.unoccupied_r - self.s_G


def bit_counts(g: TannerGraph, cg: CheckGraph, ident: Mapping, reals) -> tuple[dict, dict]:
    """Per bit: realizations inducing it, and realizations meeting its own faces.

    The second count ("local") only looks at faces touching the bit's
    identified face/edge/node, which is what the closed-form values count.
    """
    direct = Counter()
    local = Counter()
    touch: dict = {}
    for b in g.bit_nodes:
        it = ident[b]
        if it.kind in ("face", "faces"):
            touch[b] = ("all", frozenset(it.faces))
        elif it.kind == "edge":
            touch[b] = ("any", frozenset(cg.edge_faces[it.target]))
        elif it.kind == "node":
            touch[b] = ("any", frozenset(f for f, c in enumerate(cg.face_corners) if it.target in c))
        else:
            touch[b] = ("any", frozenset())
    masks = g.check_masks
    for rl in reals:
        cmask, _ = _vc_mask(g, cg, rl.vertex_set)
        for j, b in enumerate(g.bit_nodes):
            if not masks[j] & ~cmask:
                direct[b] += 1
            mode, fs = touch[b]
            if (mode == "all" and fs <= rl.vertex_set) or (mode == "any" and fs & rl.vertex_set):
                local[b] += 1
    return dict(direct), dict(local)


def q_of_bit(g: TannerGraph, cg: CheckGraph, ident: Mapping, bit, p: int, dual: Optional[DualGraph] = None,
             local: bool = True) -> int:
    d = dual if dual is not None else build_dual(cg)
    reals = all_realizations(d, p)
    direct, loc = bit_counts(g, cg, ident, reals)
    return (loc if local else direct).get(bit, 0)


def compute_Y(g: TannerGraph, cg: CheckGraph, dual: DualGraph, p: int, ident: Mapping) -> YBreakdown:
    tp = tree_params(p)
    reals = all_realizations(dual, p)
    occ = IdentificationMap(ident).occupancy()
    rec = recurrence_table(dual, p, occ, reals)
    W_sum = Vc_sum = 0
    for rl in reals:
        w, size = realization_weight(g, cg, rl.vertex_set)
        W_sum += w
        Vc_sum += size
    direct, local = bit_counts(g, cg, ident, reals)
    eta = Counter()
    eta_local = Counter()
    for b in g.bit_nodes:
        k = min(g.degree(b), 4)
        eta[k] += direct.get(b, 0)
        eta_local[k] += local.get(b, 0)
    th = theta(p)
    deg2 = [b for b in g.bit_nodes if ident[b].kind == "edge"]
    deg1 = [b for b in g.bit_nodes if ident[b].kind == "node"]
    n3 = sum(1 for b in g.bit_nodes if ident[b].kind == "face")
    _, s_all = find_singular_nodes(g, cg, occ)
    s_G = s_all if p == 4 else 0
    return YBreakdown(
        p=p, t=tp.t, realizations=len(reals), W_sum=W_sum, Vc_sum=Vc_sum, cycle_sum=rec.cycle_sum,
        eta1=eta[1], eta2=eta[2], eta3=eta[3], eta_high=eta[4] + eta[0],
        eta1_local=eta_local[1], eta2_local=eta_local[2], eta3_local=eta_local[3],
        eta1_bound=len(deg1) * th - s_G,
        eta2_analytic=sum(th - rec.total(ident[b].target) for b in deg2),
        eta3_analytic=n3 * p * tp.t,
        X=x_term(g.n, g.m, p),
        unoccupied_r=rec.sum_over(rec.unoccupied_cycle_edges),
        occupied_r=rec.sum_over(rec.occupied_cycle_edges),
        s_G=s_G,
    )


@dataclass(frozen=True)
class SupportingSet:
    faces: frozenset
    checks: frozenset
    weight: int
    source: str  # "realization", "connected-subgraph", "singular-pattern", "face"


def find_codeword_supporting(g: TannerGraph, cg: CheckGraph, dual: DualGraph, p: int,
                             fallback: bool = True) -> Optional[SupportingSet]:
    """First codeword-supporting complete 3-graph on ``p`` dual nodes.

    Realizations are scanned root by root. If none supports a codeword and
    ``fallback`` is set, all connected dual subsets of size ``<= p`` and
    then the singular 4-face patterns are tried; these are reported with
    their source so they can be told apart.
    """
    try:
        reals = all_realizations(dual, p)
    except GirthError:
        if not fallback:
            raise
        reals = []
    for rl in reals:
        w, size = realization_weight(g, cg, rl.vertex_set)
        if w > size:
            return SupportingSet(rl.vertex_set, cg.vc(rl.vertex_set), w, "realization")
    if not fallback:
        return None
    for U in sorted(connected_subsets(dual, p), key=lambda s: (len(s), sorted(s))):
        w, size = realization_weight(g, cg, U)
        if w > size:
            return SupportingSet(U, cg.vc(U), w, "connected-subgraph")
    for faces, _inner, _edges in find_singular_patterns(cg):
        w, size = realization_weight(g, cg, faces)
        if w > size:
            return SupportingSet(faces, cg.vc(faces), w, "singular-pattern")
    return None


def prelude_face(g: TannerGraph, cg: CheckGraph) -> tuple[int, int]:
    """Face with the most induced bits and that count."""
    best = (-1, -1)
    for f in range(len(cg.faces)):
        w, _ = realization_weight(g, cg, [f])
        if w > best[1]:
            best = (f, w)
    return best


@dataclass
class BoundReport:
    design_rate: Fraction
    p: Optional[int]
    certified: bool
    bound: Optional[int]
    path: str
    witness_checks: tuple = ()
    witness: Optional[BitVector] = None
    witness_bits: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def witness_weight(self) -> Optional[int]:
        return self.witness.weight if self.witness is not None else None

    def to_dict(self) -> dict:
        return {
            "design_rate": str(self.design_rate),
            "p": self.p,
            "certified": self.certified,
            "bound": self.bound,
            "path": self.path,
            "witness_checks": [str(c) for c in self.witness_checks],
            "witness_bits": [str(b) for b in self.witness_bits],
            "witness_weight": self.witness_weight,
            "diagnostics": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.diagnostics.items()},
        }


def prelude_bound(g: TannerGraph, cg: CheckGraph) -> BoundReport:
    """Face-averaging bound 3 for graphs of maximum bit degree 3."""
    if g.max_bit_degree() > 3:
        raise ContractViolation("face averaging needs bit degree at most 3")
    R = g.design_rate
    f, w = prelude_face(g, cg)
    diag = {"face": f, "face_weight": w, "faces": len(cg.faces)}
    if w < 5:
        return BoundReport(R, 0, False, None, "prelude", diagnostics=diag)
    checks = tuple(sorted(cg.face_corners[f], key=lambda c: g.check_index[c]))
    x = extract_low_weight_codeword(g, checks)
    return BoundReport(R, 0, x.weight <= 3, 3, "prelude", checks, x, tuple(x.support(g)), diag)


def _with_witness(ctx: Context, R, p, bound, path, checks, diag) -> BoundReport:
    g = ctx.g
    checks = tuple(sorted(checks, key=lambda c: g.check_index[c]))
    x = extract_low_weight_codeword(g, checks)
    ok = is_codeword(g, x) and 0 < x.weight <= bound
    if not ok:
        diag["witness_problem"] = f"weight {x.weight} exceeds bound {bound}"
    return BoundReport(R, p, ok, bound, path, checks, x, tuple(x.support(g)), diag)


def certify_bound(g: TannerGraph, emb: Optional[Embedding] = None) -> BoundReport:
    """Full pipeline: fast paths, then the rate-dependent search."""
    R = g.design_rate
    zero = g.bits_of_degree(0)
    if zero:
        x = BitVector.from_support(g, [zero[0]])
        return BoundReport(R, None, True, 1, "degree-0", (), x, (zero[0],), {})
    # planarity is settled before any other shortcut
    if emb is None:
        emb = tanner_embedding(g)
    else:
        _validate_tanner_embedding(g, emb)
    seen: dict = {}
    for b in g.bit_nodes:
        nb = g.neighborhood(b)
        if nb in seen:
            x = BitVector.from_support(g, [seen[nb], b])
            return BoundReport(R, None, True, 2, "duplicate-neighbourhood", tuple(sorted(
                nb, key=lambda c: g.check_index[c])), x, (seen[nb], b), {})
        seen[nb] = b
    if R < CERTIFIED_MIN_RATE:
        return BoundReport(R, None, False, None, "out-of-scope", diagnostics={"reason": "rate below 9/16"})
    p = p_of_rate(R)
    if g.m < 3:
        # every bit is induced by the whole check set
        return _with_witness(Context(g, emb, None, None, None), R, p, g.m + 1, "small-check-set",
                             g.check_nodes, {})
    ctx = make_context(g, emb)
    cg, dual = ctx.cg, ctx.dual
    gi = girth(dual)
    multi = detect_multi_edges(dual)
    diag: dict = {"girth": gi, "multi_edge_faces": list(multi) if multi else None, "m": g.m, "n": g.n}

    if p == 0:
        if g.max_bit_degree() <= 3:
            rep = prelude_bound(g, cg)
            if rep.certified:
                rep.diagnostics.update(diag)
                return rep
        found = _search(ctx, 1, 3)
        if found is None:
            diag["reason"] = "no supporting face or edge"
            return BoundReport(R, 0, False, 3, "prelude", diagnostics=diag)
        diag["source"] = found.source
        return _with_witness(ctx, R, 0, 3, "prelude", found.checks, diag)

    bound = p + 3
    if p >= 5 and gi < 5:
        diag["reason"] = f"dual girth {gi} below 5 required for p={p}"
        return BoundReport(R, p, False, bound, "not-certifiable", diagnostics=diag)
    found = find_codeword_supporting(g, cg, dual, p)
    if found is None:
        diag["reason"] = "no codeword-supporting set found"
        return BoundReport(R, p, False, bound, "search", diagnostics=diag)
    diag["source"] = found.source
    diag["X"] = x_term(g.n, g.m, p)
    return _with_witness(ctx, R, p, bound, "search", found.checks, diag)


def _search(ctx: Context, max_nodes: int, max_weight: int) -> Optional[SupportingSet]:
    """Smallest connected dual set whose extracted codeword has weight ``<= max_weight``."""
    g, cg = ctx.g, ctx.cg
    for size in range(1, max_nodes + 3):
        for U in sorted((s for s in connected_subsets(ctx.dual, size) if len(s) == size), key=sorted):
            w, n_checks = realization_weight(g, cg, U)
            if w > n_checks:
                x = extract_low_weight_codeword(g, cg.vc(U))
                if x.weight <= max_weight:
                    return SupportingSet(U, cg.vc(U), w, "connected-subgraph")
    return None


@dataclass
class DeltaEntry:
    """One step of the ledger.

    ``measured`` is the change of the incidence-weight sum (each bit counted
    in the realizations that contain its face, touch its edge or touch its
    check) caused by the step alone; ``measured_induced`` is the change of
    the true induced-bit sum, which can only be larger per bit. For DE
    steps ``alpha`` counts realizations containing all faces of the
    expanded bit, and ``combined_*`` cover the DE together with the ``x``
    face-freeing DS steps right before it.
    """

    step: TransformStep
    measured: int
    measured_induced: int
    analytic: Fraction
    r: int = 0
    singular: bool = False
    alpha: Optional[int] = None
    alpha_bound: Optional[Fraction] = None
    combined_measured: Optional[int] = None
    combined_analytic: Optional[Fraction] = None

    @property
    def on_cycle_edge(self) -> bool:
        return self.r > 0


def measured_W(g: TannerGraph, cg: CheckGraph, reals) -> int:
    return sum(realization_weight(g, cg, rl.vertex_set)[0] for rl in reals)


def incidence_W(g: TannerGraph, cg: CheckGraph, ident: Mapping, reals) -> int:
    _, local = bit_counts(g, cg, ident, reals)
    return sum(local.values())


def delta_ledger(g_prime: TannerGraph, steps, cg: CheckGraph, ident: Mapping, p: int,
                 dual: Optional[DualGraph] = None) -> list[DeltaEntry]:
    """Measured change of the realization weight sums for each step, next to its closed form.

    DS2 onto edge ``e``: ``delta - r(e)``. DS1: ``delta`` less one when the
    new bit is singular at ``p = 4``. DE(x): ``delta_DE(x)`` minus the
    recurrence of the DS2 targets freed for it.
    """
    d = dual if dual is not None else build_dual(cg)
    reals = all_realizations(d, p)
    rec = recurrence_table(d, p, None, reals)
    interior = set()
    if p == 4:
        for _faces, inner, _edges in find_singular_patterns(cg):
            interior |= inner
    h, it = g_prime, IdentificationMap(ident)
    before = incidence_W(h, cg, it, reals)
    before_ind = measured_W(h, cg, reals)
    out: list[DeltaEntry] = []
    for s in steps:
        h2, it2 = apply_step(h, s, cg, it)
        after = incidence_W(h2, cg, it2, reals)
        after_ind = measured_W(h2, cg, reals)
        entry = DeltaEntry(s, after - before, after_ind - before_ind, Fraction(0))
        if s.kind == DS2:
            entry.r = rec.total(s.target)
            entry.analytic = delta(p) - entry.r
        elif s.kind == DS1:
            entry.singular = s.target in interior
            entry.analytic = delta(p) - (1 if entry.singular else 0)
        else:
            x = s.x
            faces = set(it2[s.removed].faces)
            entry.analytic = Fraction(-p * tree_params(p).t)
            entry.alpha = sum(1 for rl in reals if faces <= rl.vertex_set)
            entry.alpha_bound = {1: alpha1_bound(p), 2: alpha2_bound(p)}.get(x, Fraction(0))
            freeing = out[-x:] if x and len(out) >= x else []
            entry.combined_measured = entry.measured + sum(e.measured for e in freeing)
            entry.combined_analytic = (delta_de_bound(p, x) - sum(e.r for e in freeing)
                                       - sum(1 for e in freeing if e.singular))
        out.append(entry)
        h, it, before, before_ind = h2, it2, after, after_ind
    return out
