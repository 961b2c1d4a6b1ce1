"""Rate sweep: oracle distance against the certified bound over random ensembles."""

from __future__ import annotations

import csv
import io
import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .bounds import CERTIFIED_MIN_RATE, certify_bound, p_of_rate
from .errors import InvalidSpec, UnsupportedRate
from .generate import EnsembleSpec, derive_seed, generate_one
from .oracle import min_distance_oracle
from .tanner import is_codeword

log = logging.getLogger(__name__)

COLUMNS = ("R", "p", "bound", "count", "max_d", "violations", "avg_ms")
MAX_N = 28
WORKERS_ENV = "PLANARTANNER_WORKERS"


@dataclass
class SweepRow:
    R: Fraction
    p: Optional[int]
    bound: Optional[int]
    count: int
    max_d: Optional[int]
    violations: int
    avg_ms: float

    def as_csv(self, timing: bool = True) -> list:
        return [
            str(self.R),
            "" if self.p is None else self.p,
            "uncertified" if self.bound is None else self.bound,
            self.count,
            "" if self.max_d is None else self.max_d,
            self.violations,
            f"{self.avg_ms:.3f}" if timing else "0",
        ]


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def parse_rates(spec: str) -> list[Fraction]:
    """``a:b:step`` inclusive grid, or a comma list; empty string gives no rates."""
    spec = spec.strip()
    if not spec:
        return []
    if ":" in spec:
        a, b, step = (parse_fraction(x) for x in spec.split(":"))
        if step <= 0:
            raise ValueError("rate step must be positive")
        out = []
        r = a
        while r <= b:
            out.append(r)
            r += step
        return out
    return [parse_fraction(x) for x in spec.split(",") if x.strip()]


def parse_range(spec: str) -> tuple[int, int]:
    lo, hi = spec.split(":")
    lo, hi = int(lo), int(hi)
    if lo < 3 or hi < lo:
        raise ValueError("m range must satisfy 3 <= lo <= hi")
    return lo, hi


def sizes_for_rate(R: Fraction, m_lo: int, m_hi: int, max_n: int = MAX_N) -> list[tuple[int, int]]:
    """``(m, n)`` pairs with design rate exactly ``R`` and ``n <= max_n``."""
    out = []
    for m in range(m_lo, m_hi + 1):
        n = Fraction(m) / (1 - R) if R < 1 else None
        if n is not None and n.denominator == 1 and m < n <= max_n:
            out.append((m, int(n)))
    return out


def distinct_profile(rng: random.Random, m: int, n: int) -> dict:
    """Degree profile that avoids forced duplicate neighbourhoods when possible."""
    faces, edges = 2 * m - 4, 3 * m - 6
    lo3 = max(0, n - edges - m)
    if lo3 > faces:
        lo3 = faces
    n3 = rng.randint(lo3, min(faces, n))
    left = n - n3
    n2 = rng.randint(max(0, left - m), min(left, edges)) if left - m <= edges else min(left, edges)
    n1 = left - n2
    profile = {3: n3, 2: n2, 1: n1}
    # occasionally merge spare faces into one high-degree bit
    spare = faces - n3
    if m >= 5 and spare >= 1 and n3 >= 1 and rng.random() < 0.25:
        x = rng.randint(1, min(spare, m - 3))
        profile[3] -= 1
        profile[3 + x] = 1
    return {k: v for k, v in profile.items() if v}


def _one(args):
    R, m, n, seed, timing = args
    rng = random.Random(seed)
    try:
        spec = EnsembleSpec(m, distinct_profile(rng, m, n), seed=seed)
        gg = generate_one(spec, rng.getrandbits(64))
    except InvalidSpec as exc:
        return None, str(exc)
    start = time.perf_counter()
    rep = certify_bound(gg.graph, gg.embedding)
    d = min_distance_oracle(gg.graph)
    ms = (time.perf_counter() - start) * 1000.0
    witness_ok = (not rep.certified) or (rep.witness is not None and is_codeword(gg.graph, rep.witness)
                                         and 0 < rep.witness.weight <= rep.bound)
    return (d, rep.certified, rep.bound, witness_ok, ms), None


def sweep(rates: Iterable[Fraction], per_rate: int, m_range: tuple[int, int], seed: int,
          workers: Optional[int] = None) -> list[SweepRow]:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    rows = []
    for R in rates:
        R = Fraction(R)
        try:
            p = p_of_rate(R)
            bound = p + 3 if R >= CERTIFIED_MIN_RATE else None
        except UnsupportedRate:
            p, bound = None, None
        sizes = sizes_for_rate(R, *m_range)
        if not sizes:
            log.warning("rate %s: no (m, n) with n <= %d in m range %s; skipped", R, MAX_N, m_range)
            rows.append(SweepRow(R, p, bound, 0, None, 0, 0.0))
            continue
        jobs = []
        for i in range(per_rate):
            m, n = sizes[i % len(sizes)]
            jobs.append((R, m, n, derive_seed(seed, hash_rate(R) + i), True))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(_one, jobs))
        else:
            results = [_one(j) for j in jobs]
        ds, times, violations = [], [], 0
        for res, reason in results:
            if res is None:
                log.info("rate %s: skipped instance (%s)", R, reason)
                continue
            d, certified, rep_bound, witness_ok, ms = res
            ds.append(d)
            times.append(ms)
            if bound is not None and d > bound:
                violations += 1
            elif not witness_ok:
                violations += 1
        rows.append(SweepRow(R, p, bound, len(ds), max(ds) if ds else None, violations,
                             sum(times) / len(times) if times else 0.0))
    return rows


def hash_rate(R: Fraction) -> int:
    """Stable per-rate offset for seed derivation."""
    return (R.numerator * 1_000_003 + R.denominator * 7919) * 100_000


def rows_to_csv(rows: list[SweepRow], timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(r.as_csv(timing))
    return buf.getvalue()
