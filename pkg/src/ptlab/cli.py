"""Command-line front end: ptlab {verify,search,qm,curve}.

Exit status is 0 when every check passes, 2 when a computed result
contradicts a stated theorem, and 1 for usage or resource errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import catalog
from .circle import CircleCtx
from .curve import MAX_CURVE_DEGREE, bound_audit, curve_report
from .family import FAMILIES, TrinomialFamily, instantiate, theorem_verdict
from .gf2m import new_field
from .perm import is_permutation_bruteforce, is_pp_via_criterion
from .poly import UniPoly
from .qm import classify_pair

EXIT_OK, EXIT_USAGE, EXIT_FINDING = 0, 1, 2

VERIFY_MAX_M = 12
SEARCH_MAX_M = 8
SEARCH_MAX_BOUND = 32
QM_MAX_M = 8
SPOT_CHECK_RATE = 64

CSV_COLUMNS = {
    "verify": ["theorem", "m", "predicted", "observed", "agree", "elapsed_ms"],
    "search": ["m", "r", "alpha", "beta", "catalog", "catalog_condition_holds", "spot_checked"],
    "qm": ["F", "G", "m", "equivalent", "d", "A1", "A2", "step1_matches", "note"],
    "curve": ["m", "affine", "affine_y_nonzero", "infinity", "projective",
              "bound_lo", "bound_hi", "verdict"],
    "audit": ["m", "value", "exact", "positive_unfloored", "exceeds_y0_roots"],
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m_values: list[int]
    r_max: int = 8
    alpha_max: int = 8
    pairs: list[tuple[str, str]] = field(default_factory=list)
    theorems: list[str] = field(default_factory=list)
    output: str | None = None
    format: str = "json"
    workers: int = 1
    seed: int = 0
    audit_only: bool = False
    timing: bool = True


def parse_m_range(text: str) -> list[int]:
    """'5', '1..9', '1,3,5' or mixtures like '1..4,7'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = (int(v) for v in part.split(".."))
                if lo > hi:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad m value {part!r}") from None
    if any(m < 1 for m in out):
        raise UsageError("m must be positive")
    return sorted(set(out))


def _named_poly(name: str, m: int):
    """ExpPoly for F1..F3, T1..T3, NONEXIST or a catalog row f1..f18.

    Case matters for the F/f prefix: F1 is the new class, f1 is row 1.
    """
    key = name.strip()
    aliases = {"F1": "T1", "F2": "T2", "F3": "T3"}
    up = aliases.get(key, key.upper())
    if up in FAMILIES and not key.startswith("f"):
        return instantiate(FAMILIES[up], m)
    if key.startswith("f") and key[1:].isdigit():
        i = int(key[1:])
        if 1 <= i <= len(catalog.ALL_ROWS):
            return catalog.row(i).exp_poly(m)
    raise UsageError(f"unknown polynomial name {name!r}")


def _emit(records: list[dict], kind: str, cfg: RunConfig) -> None:
    if cfg.format == "json":
        text = "".join(json.dumps(r, sort_keys=False) + "\n" for r in records)
    else:
        buf = io.StringIO()
        cols = [c for c in CSV_COLUMNS[kind] if cfg.timing or c != "elapsed_ms"]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: ("" if r.get(k) is None else
                            json.dumps(r[k]) if isinstance(r.get(k), list) else r[k])
                        for k in cols})
        text = buf.getvalue()
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pool_map(fn, items, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> int:
    if max(cfg.m_values) > VERIFY_MAX_M:
        raise UsageError(f"verify supports m <= {VERIFY_MAX_M}")
    theorems = cfg.theorems or ["T1", "T2", "T3"]
    jobs = [(t, m) for t in theorems for m in cfg.m_values]
    verdicts = _pool_map(lambda job: theorem_verdict(*job), jobs, cfg.workers)
    records = [v.to_dict(timing=cfg.timing) for v in verdicts]
    _emit(records, "verify", cfg)
    bad = [v for v in verdicts if v.agree is False]
    for v in bad:
        print(f"DISAGREEMENT: {v.theorem_id} at m={v.m}: predicted {v.predicted}, "
              f"observed {v.observed}", file=sys.stderr)
    return EXIT_FINDING if bad else EXIT_OK


def _search_one(m: int, rng: random.Random, cfg: RunConfig) -> tuple[list[dict], list[str]]:
    ctx = new_field(2 * m)
    circle = CircleCtx(m, ctx)
    hits: list[dict] = []
    problems: list[str] = []
    for alpha in range(2, cfg.alpha_max + 1):
        for beta in range(1, alpha):
            h = UniPoly.from_exponents(ctx, [0, beta, alpha])
            for r in range(1, cfg.r_max + 1):
                crit = is_pp_via_criterion(ctx, circle, r, h)
                checked = rng.randrange(SPOT_CHECK_RATE) == 0
                if checked:
                    brute = is_permutation_bruteforce(ctx, instantiate(TrinomialFamily(r, alpha, beta), m, ctx))
                    if brute != crit:
                        problems.append(f"criterion/brute force split at m={m} ({r},{alpha},{beta})")
                if not crit:
                    continue
                row = catalog.lookup(r, alpha, beta)
                hits.append({
                    "m": m, "r": r, "alpha": alpha, "beta": beta,
                    "catalog": row.name if row else None,
                    "catalog_condition_holds": row.holds(m) if row else None,
                    "spot_checked": checked,
                })
    return hits, problems


def cmd_search(cfg: RunConfig) -> int:
    if max(cfg.m_values) > SEARCH_MAX_M:
        raise UsageError(f"search supports m <= {SEARCH_MAX_M}")
    if max(cfg.r_max, cfg.alpha_max) > SEARCH_MAX_BOUND or min(cfg.r_max, cfg.alpha_max) < 1:
        raise UsageError(f"--r-max and --alpha-max must lie in 1..{SEARCH_MAX_BOUND}")
    # one RNG per m, derived from the seed, keeps output independent of workers
    seeds = {m: random.Random(f"{cfg.seed}:{m}") for m in cfg.m_values}
    results = _pool_map(lambda m: _search_one(m, seeds[m], cfg), cfg.m_values, cfg.workers)
    records = [h for hits, _ in results for h in hits]
    _emit(records, "search", cfg)
    problems = [p for _, ps in results for p in ps]
    for p in problems:
        print(f"DISAGREEMENT: {p}", file=sys.stderr)
    return EXIT_FINDING if problems else EXIT_OK


DEFAULT_PAIRS = [("F1", "F2"), ("F1", "F3"), ("F2", "F3")]


def _qm_one(job) -> dict:
    (a, b), m = job
    F, G = _named_poly(a, m), _named_poly(b, m)
    ctx = F.ctx
    if not (is_permutation_bruteforce(ctx, F) and is_permutation_bruteforce(ctx, G)):
        return {"F": a, "G": b, "m": m, "equivalent": None, "d": None, "A1": None,
                "A2": None, "step1_matches": None, "note": "not both permutations at this m"}
    rec = classify_pair(a, F, b, G, m).to_dict()
    rec["note"] = None
    return rec


def cmd_qm(cfg: RunConfig) -> int:
    if max(cfg.m_values) > QM_MAX_M:
        raise UsageError(f"qm supports m <= {QM_MAX_M}")
    pairs = cfg.pairs or DEFAULT_PAIRS
    for a, b in pairs:
        _named_poly(a, 1), _named_poly(b, 1)
    jobs = [(p, m) for p in pairs for m in cfg.m_values]
    records = _pool_map(_qm_one, jobs, cfg.workers)
    _emit(records, "qm", cfg)
    return EXIT_OK


def cmd_curve(cfg: RunConfig) -> int:
    if cfg.audit_only:
        _emit([bound_audit(m).to_dict() for m in cfg.m_values], "audit", cfg)
        return EXIT_OK
    if max(cfg.m_values) > MAX_CURVE_DEGREE:
        raise UsageError(f"curve supports m <= {MAX_CURVE_DEGREE}")
    reports = [curve_report(m, cfg.workers) for m in cfg.m_values]
    _emit([r.to_dict() for r in reports], "curve", cfg)
    outside = [r for r in reports if not r.within_bound]
    for r in outside:
        print(f"DISAGREEMENT: projective count {r.projective_count} at m={r.m} "
              f"outside [{r.bound_lo}, {r.bound_hi}]", file=sys.stderr)
    return EXIT_FINDING if outside else EXIT_OK


COMMANDS = {"verify": cmd_verify, "search": cmd_search, "qm": cmd_qm, "curve": cmd_curve}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--m", required=True, help="degrees, e.g. 5, 1..9 or 1,3,5")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", help="write records here instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-timing", action="store_true",
                        help="drop elapsed_ms so reruns are byte-identical")

    p = _Parser(prog="ptlab", description="Permutation trinomials over GF(2^(2m)).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="brute-force theorem verdicts")
    v.add_argument("--theorems", default="t1,t2,t3", help="comma list of t1,t2,t3,nonexist")

    s = sub.add_parser("search", parents=[common], help="scan (r, alpha, beta) for permutations")
    s.add_argument("--r-max", type=int, default=8)
    s.add_argument("--alpha-max", type=int, default=8)

    q = sub.add_parser("qm", parents=[common], help="QM classification of named pairs")
    q.add_argument("--pairs", default="", help="e.g. F1:F2,f5:f6")

    c = sub.add_parser("curve", parents=[common], help="point counts on H")
    c.add_argument("--audit-only", action="store_true", help="only evaluate the bound expression")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.workers < 1:
        raise UsageError("--workers must be positive")
    if not -(1 << 63) <= ns.seed < (1 << 64):
        raise UsageError("--seed must fit in 64 bits")
    cfg = RunConfig(command=ns.command, m_values=parse_m_range(ns.m), output=ns.output,
                    format=ns.format, workers=ns.workers, seed=ns.seed,
                    timing=not ns.no_timing)
    if ns.command == "verify":
        names = [t.strip().upper() for t in ns.theorems.split(",") if t.strip()]
        for t in names:
            if t not in FAMILIES:
                raise UsageError(f"unknown theorem {t!r}")
        cfg.theorems = names
    elif ns.command == "search":
        cfg.r_max, cfg.alpha_max = ns.r_max, ns.alpha_max
    elif ns.command == "qm":
        pairs = []
        for item in filter(None, (x.strip() for x in ns.pairs.split(","))):
            if item.count(":") != 1:
                raise UsageError(f"pair {item!r} should look like A:B")
            pairs.append(tuple(item.split(":")))
        cfg.pairs = pairs
    elif ns.command == "curve":
        cfg.audit_only = ns.audit_only
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ValueError, OSError) as exc:
        print(f"ptlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
