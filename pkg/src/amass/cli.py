"""Command-line front end: ``amass <subcommand> ...``.

Output is JSON on stdout; rationals are strings "p/q".  Exit status is 0 on
success, 1 when a verification fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class CacheCorruption(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    budget: int = 10 ** 8
    precision: dict = field(default_factory=dict)     # p -> k
    workers: int = 1
    cache: str = ""
    format: str = "json"

    def validate(self):
        if self.budget <= 0:
            raise UsageError("budget must be positive")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        return self


def _parse_precision(text):
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        try:
            p, k = item.split(":")
            out[int(p)] = int(k)
        except ValueError:
            raise UsageError(f"bad precision entry {item!r}, expected p:k") from None
    return out


def load_config(path=None) -> RunConfig:
    cfg = RunConfig()
    path = path or os.environ.get("AMASS_CONFIG")
    if not path:
        return cfg
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in ("budget", "workers"):
                setattr(cfg, key, int(value))
            elif key == "precision":
                cfg.precision = _parse_precision(value)
            elif key in ("cache", "format"):
                setattr(cfg, key, value)
            else:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
    return cfg


# ---------------------------------------------------------------------------
# cache

class Cache:
    """Append-only JSON-lines journal keyed by (operation, canonical arguments)."""

    def __init__(self, path, version=__version__):
        self.path = path
        self.version = version
        self.hits = 0

    @staticmethod
    def key(op, args) -> str:
        return json.dumps([op, args], sort_keys=True, separators=(",", ":"))

    def _entries(self):
        if not self.path or not os.path.exists(self.path):
            return {}
        out = {}
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    raise CacheCorruption(f"{self.path}:{lineno}: unreadable line") from None
                if rec.get("version") != self.version:
                    continue
                k = rec["key"]
                if k in out and out[k] != rec["value"]:
                    raise CacheCorruption(f"{self.path}:{lineno}: conflicting values for {k}")
                out[k] = rec["value"]
        return out

    def _append(self, k, value):
        rec = {"key": k, "value": value, "version": self.version,
               "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
        # no key sorting: the value keeps the field order of a fresh result
        line = json.dumps(rec, separators=(",", ":")) + "\n"
        with open(self.path, "a") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(line)
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def get_or_compute(self, op, args, thunk, recompute=False):
        if not self.path:
            return thunk()
        k = self.key(op, args)
        entries = self._entries()
        if k in entries and not recompute:
            self.hits += 1
            return entries[k]
        value = json.loads(json.dumps(thunk()))
        if k in entries:
            if entries[k] != value:
                raise CacheCorruption(f"recomputed value differs from cache for {k}")
            return value
        self._append(k, value)
        return value


# ---------------------------------------------------------------------------
# commands

def _q(x) -> str:
    return str(Fraction(x))


def cmd_mass(args, cfg):
    from . import localmass, monogen
    f = monogen.parse_poly(args.poly)
    p = args.prime
    k = args.k or cfg.precision.get(p)
    if not localmass.dedekind_is_p_maximal(f, p):
        raise UsageError(f"polynomial is not {p}-maximal; no mass formula is claimed")
    out = {"total_mass": _q(localmass.total_mass(f, p, k)),
           "evenly_ramified": localmass.is_evenly_ramified(f, p)}
    if args.pm:
        out["m_plus"] = _q(localmass.total_mass_pm(f, p, 1, k))
        out["m_minus"] = _q(localmass.total_mass_pm(f, p, -1, k))
    return out, True


def cmd_genus(args, cfg):
    from . import genus, pairs
    if args.so_order:
        n, k = args.n, args.k
        ratio = genus.so_volume_ratio_2adic(n, k, cfg.budget)
        expect = genus.so_volume_ratio_formula(n)
        return {"n": n, "k": k, "ratio": _q(ratio), "closed_form": _q(expect),
                "match": ratio == expect}, ratio == expect
    if args.matrix:
        A = pairs.parse_matrix(args.matrix)
        g = genus.classify_2adic(A)
        r = genus.classify_real(A)
        return {"n": g.n, "type": g.type, "hasse_witt_2": g.hasse_witt, "octane": g.octane,
                "det_mod_8": g.det_square_class, "label": g.label,
                "negative_index": genus.negative_index(A), "hasse_witt_inf": r.hasse_witt}, True
    if args.canonical:
        n, sign, hw = args.canonical
        M = genus.canonical_representative(int(n), sign, int(hw))
        return {"matrix": M.encode()}, True
    if args.c_inf:
        r1, n = args.c_inf
        c0, c2 = genus.c_inf_split(n, r1)
        return {"r1": r1, "n": n, "c_inf_0": c0, "c_inf_2": c2}, True
    raise UsageError("genus needs --matrix, --so-order, --canonical or --c-inf")


def cmd_cusp(args, cfg):
    from . import cusp
    rep = cusp.verify_cusp_bounds(args.n, keep_table=args.table)
    return rep.to_json(), rep.passed


def _parse_ram(text):
    out = {}
    for item in filter(None, (s.strip() for s in (text or "").split(","))):
        try:
            p, r = item.split(":")
            out[int(p)] = Fraction(r)
        except ValueError:
            raise UsageError(f"bad ramification entry {item!r}, expected p:r") from None
    return out


def cmd_avg(args, cfg):
    from . import averages
    F = averages.FamilySpec(args.n, args.r1, args.r2, _parse_ram(args.ram))
    rep = averages.report(F)
    if cfg.format == "csv":
        return averages.to_csv([rep]), True
    out = {"cl2": _q(rep.avg_cl2), "cl2_plus": _q(rep.avg_cl2_plus),
           "cl2_star": _q(rep.avg_cl2_star), "note": rep.note}
    if args.trace:
        out["trace"] = {t: [[k, str(v)] for k, v in tr] for t, tr in rep.trace.items()}
    return out, True


def cmd_gauss(args, cfg):
    from . import gauss
    if args.disc is not None:
        D = args.disc
        h, hp = gauss.class_numbers(D)
        t = gauss.narrow_two_torsion(D)
        w = gauss.omega(D)
        return {"disc": D, "omega": w, "h": h, "h_plus": hp, "narrow_two_torsion": t,
                "genus_theory": t == 2 ** (w - 1)}, t == 2 ** (w - 1)
    if args.check:
        lo, hi = args.check
        rep = gauss.genus_theory_check(lo, hi)
        return {"lo": lo, "hi": hi, "checked": rep.checked, "passed": rep.passed,
                "counterexamples": rep.counterexamples}, rep.passed
    if args.survey:
        lo, hi = args.survey
        rows = gauss.empirical_survey(lo, hi)
        if cfg.format == "csv":
            lines = ["disc,omega,h,h_plus,narrow_two_torsion"]
            lines += [",".join(str(x) for x in r) for r in rows]
            return "\n".join(lines) + "\n", True
        return {"rows": [list(r) for r in rows], "summary": gauss.survey_summary(rows)}, True
    raise UsageError("gauss needs --disc, --check or --survey")


def cmd_enumerate(args, cfg):
    from . import monogen
    X = Fraction(args.X)
    if args.count:
        n = sum(1 for _ in monogen.enumerate_monic(args.n, X, canonical_only=args.canonical,
                                                   dedup_sign=args.dedup_sign))
        out = {"n": args.n, "X": _q(X), "count": n}
        if not (args.canonical or args.dedup_sign):
            out["closed_form"] = monogen.enumeration_count(args.n, X)
            return out, out["closed_form"] == n
        return out, True
    polys = [list(f.coeffs) for f in monogen.enumerate_monic(
        args.n, X, canonical_only=args.canonical, dedup_sign=args.dedup_sign)]
    if len(polys) > cfg.budget:
        raise UsageError("enumeration exceeds the budget")
    return {"n": args.n, "X": _q(X), "polynomials": polys}, True


def _run_criterion(k):
    from . import acceptance
    r = acceptance.run(k)
    return r.number, r.to_json(), r.line(), r.seconds


def cmd_verify(args, cfg):
    from . import acceptance
    allk = [k for k, _, _ in acceptance.CRITERIA]
    if args.suite == "all":
        wanted = allk
    else:
        try:
            wanted = sorted({int(s) for s in args.suite.split(",")})
        except ValueError:
            raise UsageError(f"bad suite {args.suite!r}") from None
        if any(k not in allk for k in wanted):
            raise UsageError(f"unknown criterion in {args.suite!r}")
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_criterion, wanted))
    else:
        results = [_run_criterion(k) for k in wanted]
    results.sort(key=lambda r: r[0])
    for _, _, line, _ in results:
        print(line, file=sys.stderr)
    table = [f"criterion {j['criterion']:2d} {'PASS' if j['passed'] else 'FAIL'} {j['title']}"
             for _, j, _, _ in results]
    passed = all(j["passed"] for _, j, _, _ in results)
    return {"passed": passed, "table": table, "criteria": [j for _, j, _, _ in results]}, passed


COMMANDS = {
    "mass": cmd_mass, "genus": cmd_genus, "cusp": cmd_cusp, "avg": cmd_avg,
    "gauss": cmd_gauss, "enumerate": cmd_enumerate, "verify": cmd_verify,
}

# commands whose results are worth journaling
CACHED = {"mass", "genus", "cusp", "avg", "gauss"}


def build_parser():
    ap = argparse.ArgumentParser(prog="amass", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value config file (default $AMASS_CONFIG)")
    ap.add_argument("--budget", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--precision", help="p:k overrides, e.g. 2:9,3:5")
    ap.add_argument("--cache", help="JSON-lines cache path")
    ap.add_argument("--no-cache", action="store_true")
    ap.add_argument("--recompute", action="store_true",
                    help="ignore cached values, recompute and compare")
    ap.add_argument("--format", choices=["json", "csv"])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mass", help="total local mass of a monic polynomial")
    p.add_argument("--poly", required=True, help="coefficients, leading first: 1,0,0,1,1")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--pm", action="store_true", help="also report the +-1 masses")

    p = sub.add_parser("genus", help="2-adic and real invariants, volume ratios")
    p.add_argument("--matrix", help="rows separated by ';': 1,0;0,-1")
    p.add_argument("--so-order", action="store_true")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--canonical", nargs=3, metavar=("N", "SIGN", "HW"))
    p.add_argument("--c-inf", nargs=2, type=int, metavar=("R1", "N"))

    p = sub.add_parser("cusp", help="cusp exponent verification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table", action="store_true")

    p = sub.add_parser("avg", help="average 2-torsion for a family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r1", type=int, required=True)
    p.add_argument("--r2", type=int, required=True)
    p.add_argument("--ram", help="even ramification densities, e.g. 3:1/2,7:1/4")
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("gauss", help="binary quadratic forms and genus theory")
    p.add_argument("--disc", type=int)
    p.add_argument("--check", nargs=2, type=int, metavar=("LO", "HI"))
    p.add_argument("--survey", nargs=2, type=int, metavar=("LO", "HI"))

    p = sub.add_parser("enumerate", help="monic polynomials of bounded height")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--X", required=True)
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--dedup-sign", action="store_true")
    p.add_argument("--count", action="store_true")

    p = sub.add_parser("verify", help="run acceptance criteria")
    p.add_argument("--suite", default="all", help="'all' or a list such as 1,5,7")
    return ap


def _config_from(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.budget is not None:
        cfg.budget = args.budget
    if args.workers is not None:
        cfg.workers = args.workers
    if args.precision:
        cfg.precision.update(_parse_precision(args.precision))
    if args.cache:
        cfg.cache = args.cache
    if args.no_cache:
        cfg.cache = ""
    if args.format:
        cfg.format = args.format
    return cfg.validate()


def _cache_args(args):
    skip = {"config", "budget", "workers", "cache", "no_cache", "recompute", "format", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run_command(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = _config_from(args)
        fn = COMMANDS[args.command]
        if args.command in CACHED and cfg.cache and cfg.format == "json":
            cache = Cache(cfg.cache)
            payload = cache.get_or_compute(
                args.command, _cache_args(args),
                lambda: list(fn(args, cfg)), recompute=args.recompute)
            out, ok = payload
        else:
            out, ok = fn(args, cfg)
    except (UsageError, ValueError) as e:
        print(json.dumps({"error": str(e)}), file=sys.stderr)
        return EXIT_USAGE
    except CacheCorruption as e:
        print(json.dumps({"error": "cache corruption", "detail": str(e)}), file=sys.stderr)
        return EXIT_FAIL
    if isinstance(out, str):
        stdout.write(out)
    else:
        stdout.write(json.dumps(out, separators=(", ", ": ")) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
