"""Command line entry point: ``planartanner {analyze,oracle,verify,sweep,generate}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bounds import certify_bound
from .errors import NonPlanarError, PlanarTannerError, TrivialCodeError, UnsupportedRate
from .generate import EnsembleSpec, generate_one, derive_seed
from .io import GraphDocument, load
from .oracle import min_distance_oracle
from .sweep import parse_range, parse_rates, rows_to_csv, sweep
from .tanner import code_summary, is_codeword

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_SCOPE = 3


def _summary(doc: GraphDocument, rep) -> str:
    g = doc.graph
    s = code_summary(g)
    lines = [f"n={g.n} m={g.m} k={s.dimension} design_rate={s.design_rate}"]
    if rep.certified:
        lines.append(f"certified d <= {rep.bound} via {rep.path}; witness weight {rep.witness_weight}")
    else:
        lines.append(f"no bound certified ({rep.path}): {rep.diagnostics.get('reason', '')}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    doc = load(args.file)
    rep = certify_bound(doc.graph, doc.embedding)
    print(_summary(doc, rep), file=sys.stderr)
    print(json.dumps(rep.to_dict(), sort_keys=True))
    if rep.path == "out-of-scope":
        return EXIT_SCOPE
    return EXIT_OK


def cmd_oracle(args) -> int:
    doc = load(args.file)
    d = min_distance_oracle(doc.graph, weight_cap=args.cap)
    print(json.dumps({"min_distance": d, "exact": d is not None, "cap": args.cap}))
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load(args.file)
    g = doc.graph
    rep = certify_bound(g, doc.embedding)
    d = min_distance_oracle(g)
    ok = True
    if rep.certified:
        ok = d <= rep.bound and rep.witness is not None and is_codeword(g, rep.witness) \
            and rep.witness.weight <= rep.bound
    out = {"min_distance": d, "certified": rep.certified, "bound": rep.bound, "path": rep.path, "agree": ok}
    print(json.dumps(out, sort_keys=True))
    if not ok:
        return EXIT_VIOLATION
    if rep.path == "out-of-scope":
        return EXIT_SCOPE
    return EXIT_OK


def cmd_sweep(args) -> int:
    rates = parse_rates(args.rates)
    rows = sweep(rates, args.per_rate, parse_range(args.m_range), args.seed, workers=args.workers)
    text = rows_to_csv(rows, timing=not args.no_timing)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_VIOLATION if any(r.violations for r in rows) else EXIT_OK


def _parse_profile(text: str) -> dict:
    out = {}
    for part in text.split(","):
        deg, cnt = part.split(":")
        out[int(deg)] = int(cnt)
    return out


def cmd_generate(args) -> int:
    spec = EnsembleSpec(args.m, _parse_profile(args.profile), seed=args.seed, count=args.count)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for i in range(spec.count):
        gg = generate_one(spec, derive_seed(spec.seed, i))
        doc = GraphDocument(gg.graph, gg.embedding, gg.provenance)
        (outdir / f"graph_{i:04d}.json").write_text(doc.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="planartanner", description="Distance bounds for planar Tanner graphs.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="certify a distance bound for one graph")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    o = sub.add_parser("oracle", help="exact (or capped) minimum distance")
    o.add_argument("file")
    o.add_argument("--cap", type=int, default=None, help="weight cap for large dimensions")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="compare the certified bound with the oracle")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="bound versus oracle over a rate grid (CSV)")
    s.add_argument("--rates", required=True, help="a:b:step or comma list of rationals")
    s.add_argument("--per-rate", type=int, default=20)
    s.add_argument("--m-range", default="3:9")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--no-timing", action="store_true", help="write avg_ms as 0 for byte-stable output")
    s.set_defaults(func=cmd_sweep)

    g = sub.add_parser("generate", help="write random planar Tanner graphs as JSON documents")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--profile", required=True, help="degree:count pairs, e.g. 1:2,2:3,3:4")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UnsupportedRate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except NonPlanarError as exc:
        print(f"error: {exc}; certificate edges {exc.edges}", file=sys.stderr)
        return EXIT_INPUT
    except TrivialCodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PlanarTannerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
