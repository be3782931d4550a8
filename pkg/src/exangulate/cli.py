"""Command-line front end.

Examples::

    exangulate gen --n 2 -o pentagon.json
    exangulate k0 --n 2 --t 1-3,1-4 --x 1-4
    exangulate cc --n 2 --t 1-3,1-4 --x 1-3,1-4 --epsilon variables
    exangulate verify thm-a --n 3
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import arcmodel as am
from . import ccmap as cc
from . import exang as ex
from . import indexmaps as im
from .abelian import AbelianError, K0Element, present

__all__ = ["main", "build_parser", "RunConfig", "Report"]

VERIFY_SUITES = ("thm-a", "thm-c", "diagram", "frieze", "index", "model", "all")


class UsageError(Exception):
    """Bad command-line input (exit status 2)."""


@dataclass
class RunConfig:
    n: int
    T: am.Triangulation
    X: Tuple[am.Arc, ...]
    saturation: int = ex.DEFAULT_SATURATION
    epsilon: str = "trivial"
    fmt: str = "text"


@dataclass
class Report:
    """Result of one command: a table, a summary and pass/fail checks."""

    command: str
    config: Dict[str, object]
    header: List[str] = field(default_factory=list)
    rows: List[List[str]] = field(default_factory=list)
    summary: Dict[str, object] = field(default_factory=dict)
    checks: List[Dict[str, object]] = field(default_factory=list)
    timing: Optional[float] = None

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def check(self, name: str, passed: bool, witness=None) -> None:
        rec: Dict[str, object] = {"name": name, "passed": bool(passed)}
        if witness is not None:
            rec["witness"] = witness
        self.checks.append(rec)

    def to_json_obj(self) -> dict:
        out = {"command": self.command, "config": self.config, "header": self.header,
               "rows": self.rows, "summary": self.summary, "checks": self.checks,
               "ok": self.ok}
        if self.timing is not None:
            out["timing_seconds"] = self.timing
        return out

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json_obj(), indent=1, ensure_ascii=False) + "\n"
        if fmt == "tsv":
            lines = []
            if self.header:
                lines.append("\t".join(self.header))
            lines += ["\t".join(r) for r in self.rows]
            for k, v in self.summary.items():
                lines.append(f"# {k}\t{_flat(v)}")
            for c in self.checks:
                lines.append(f"# check\t{c['name']}\t{'pass' if c['passed'] else 'FAIL'}"
                             + (f"\t{_flat(c['witness'])}" if "witness" in c else ""))
            return "\n".join(lines) + "\n"
        lines = []
        if self.header:
            widths = [max(len(str(x)) for x in col) for col in zip(self.header, *self.rows)]
            fmt_row = "  ".join("{:<%d}" % w for w in widths)
            lines.append(fmt_row.format(*self.header).rstrip())
            lines += [fmt_row.format(*r).rstrip() for r in self.rows]
        for k, v in self.summary.items():
            lines.append(f"{k}: {_flat(v)}")
        failed = [c for c in self.checks if not c["passed"]]
        if self.checks:
            lines.append(f"checks: {len(self.checks) - len(failed)}/{len(self.checks)} passed")
        for c in failed:
            lines.append(f"FAIL {c['name']}" + (f": {_flat(c['witness'])}" if "witness" in c else ""))
        if self.timing is not None:
            lines.append(f"time: {self.timing:.2f}s")
        return "\n".join(lines) + "\n"


def _flat(v) -> str:
    if isinstance(v, (list, tuple)):
        return ", ".join(_flat(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


# ---------------------------------------------------------------------------
# Argument handling


def _arc_list(text: Optional[str], N: int) -> List[am.Arc]:
    if text is None or text.strip() == "":
        return []
    return [am.parse_arc(part, N) for part in text.split(",") if part.strip()]


def _config(args) -> RunConfig:
    n = args.n
    if n is None:
        raise UsageError("--n is required")
    if n < 1:
        raise UsageError(f"--n must be at least 1, got {n}")
    N = n + 3
    try:
        if args.t:
            T = am.Triangulation(_arc_list(args.t, N), N)
        else:
            T = am.enumerate_triangulations(n)[0]
        X = tuple(sorted(set(_arc_list(getattr(args, "x", None), N))))
    except am.ArcModelError as exc:
        raise UsageError(str(exc)) from None
    extra = [x for x in X if x not in T]
    if extra:
        raise UsageError(f"--x must be a subset of --t; not in T: {extra}")
    return RunConfig(n, T, X, args.saturation, getattr(args, "epsilon", "trivial"), args.format)


def _echo(cfg: RunConfig) -> Dict[str, object]:
    return {"n": cfg.n, "T": cfg.T.labels, "X": [x.label for x in cfg.X],
            "saturation": cfg.saturation}


def _epsilon(cfg: RunConfig, b: im.HomBundle) -> cc.EpsilonMap:
    if cfg.epsilon == "trivial":
        return cc.trivial_epsilon(b.k0_X.group, tuple(b.T.labels))
    if cfg.epsilon == "variables":
        return cc.variable_epsilon(b)
    return cc.epsilon_from_file(cfg.epsilon, b)


def _el(e: K0Element) -> str:
    return repr(e)


# ---------------------------------------------------------------------------
# Commands


def cmd_gen(args) -> Tuple[Optional[Report], str]:
    if args.n is None or args.n < 1:
        raise UsageError("gen needs --n of at least 1")
    text = ex.dumps(ex.build_d1(args.n))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return None, ""
    return None, text


def _group_report(rep: Report, rel: ex.RelativeK0, labels: Sequence[str]) -> None:
    g = rel.group
    rep.summary["group"] = g.describe()
    rep.summary["invariant_factors"] = list(g.invariant_factors)
    rep.summary["free_rank"] = g.free_rank
    rep.header = ["object", "Q_D image"]
    rep.rows = [[x, str(g.coordinates(K0Element.basis_vector(x)))] for x in labels]


def cmd_k0(args) -> Tuple[Report, str]:
    if args.category:
        C = ex.load(args.category)
        D = list(C.objects) if args.x == "all" else [
            s.strip() for s in (args.x or "").split(",") if s.strip()]
        rel = ex.k0_relative(C, D, args.saturation)
        rep = Report("k0", {"category": args.category, "D": sorted(D),
                            "saturation": args.saturation})
        _group_report(rep, rel, C.objects)
        return rep, ""
    if args.x == "all":
        if args.n is None:
            raise UsageError("--n is required")
        C = im.category(args.n)
        rel = im.relative(args.n, C.objects, args.saturation)
        rep = Report("k0", {"n": args.n, "D": "all", "saturation": args.saturation})
        _group_report(rep, rel, C.objects)
        return rep, ""
    cfg = _config(args)
    rel = im.relative(cfg.n, [x.label for x in cfg.X], cfg.saturation)
    rep = Report("k0", _echo(cfg))
    _group_report(rep, rel, im.category(cfg.n).objects)
    return rep, ""


def cmd_load(args) -> Tuple[Report, str]:
    C = ex.load(args.file)
    rep = Report("load", {"file": args.file, "saturation": args.saturation})
    rep.summary["d"] = C.d
    rep.summary["objects"] = len(C.objects)
    rep.summary["conflations"] = len(C.conflations)
    rep.summary["K0(E)"] = ex.k0_relative(C, [], args.saturation).group.describe()
    rep.summary["K0(E_all)"] = ex.k0_relative(C, C.objects, args.saturation).group.describe()
    return rep, ""


def cmd_index(args) -> Tuple[Report, str]:
    cfg = _config(args)
    rep = Report("index", _echo(cfg))
    rep.header = ["arc", "T0", "T1", "index"]
    for c in am.arcs(cfg.n):
        T0, T1 = am.index_resolution(cfg.T, c)
        rep.rows.append([c.label, repr(T0), repr(T1), _el(im.index(cfg.T, c))])
    return rep, ""


def cmd_theta(args) -> Tuple[Report, str]:
    cfg = _config(args)
    rep = Report("theta", _echo(cfg))
    rep.header = ["simple", "theta"]
    for t in cfg.T:
        rep.rows.append([am.simple_label(t), _el(im.theta_on_simple(cfg.T, t))])
    return rep, ""


def cmd_mutate(args) -> Tuple[Report, str]:
    cfg = _config(args)
    rep = Report("mutate", _echo(cfg))
    rep.header = ["t", "t*", "Y", "X"]
    chosen = _arc_list(args.arc, cfg.T.N) if args.arc else list(cfg.T)
    for t in chosen:
        try:
            m = im.mutate(cfg.T, t)
        except am.ArcModelError as exc:
            raise UsageError(str(exc)) from None
        rep.rows.append([t.label, m.t_star.label, repr(m.Y), repr(m.X)])
    return rep, ""


def cmd_nx(args) -> Tuple[Report, str]:
    cfg = _config(args)
    rep = Report("nx", _echo(cfg))
    N = im.n_subgroup(cfg.T, cfg.X)
    rep.header = ["generator"]
    rep.rows = [[_el(g)] for g in N.generators]
    rep.summary["quotient"] = present(cfg.T.labels, N.generators).describe()
    return rep, ""


def cmd_cc(args) -> Tuple[Report, str]:
    cfg = _config(args)
    b = im.bundle(cfg.T, cfg.X, cfg.saturation)
    eps = _epsilon(cfg, b)
    rep = Report("cc", dict(_echo(cfg), epsilon=cfg.epsilon))
    rep.header = ["arc", "rho"]
    for c in am.arcs(cfg.n):
        rep.rows.append([c.label, cc.rho(eps, b, c).to_text()])
    return rep, ""


def cmd_frieze(args) -> Tuple[Report, str]:
    cfg = _config(args)
    b = im.bundle(cfg.T, cfg.X, cfg.saturation)
    eps = _epsilon(cfg, b)
    g = cc.frieze(eps, b)
    rep = Report("frieze", dict(_echo(cfg), epsilon=cfg.epsilon))
    if cfg.fmt == "json":
        rep.header = ["i", "j", "value"]
        rep.rows = [[str(i), str(j), v.to_text()] for (i, j), v in sorted(g.values.items())]
    else:
        rep.header = ["distance"] + [str(v) for v in range(1, g.N + 1)]
        rep.rows = [[str(k + 1)] + [v.to_text() for v in row] for k, row in enumerate(g.rows())]
    rep.summary["rule"] = g.rule
    rep.summary["quiddity"] = [q.to_text() for q in g.quiddity()]
    for c in g.checks:
        rep.check(f"{c['check']} {c['at']}", c["passed"],
                  None if c["passed"] else {"value": c["value"]})
    return rep, ""


# ---------------------------------------------------------------------------
# Verification suites


def _pairs(n: int, T: Optional[am.Triangulation], X: Optional[Tuple[am.Arc, ...]],
           all_subsets: bool) -> List[Tuple[am.Triangulation, Tuple[am.Arc, ...]]]:
    Ts = [T] if T is not None else am.enumerate_triangulations(n)
    out = []
    for t in Ts:
        if X is not None:
            out.append((t, X))
        elif all_subsets:
            for r in range(len(t) + 1):
                out.extend((t, xs) for xs in itertools.combinations(t.arcs, r))
        else:
            out.append((t, tuple(t.arcs)))
    return out


def _task_gx_iso(job):
    n, T, X, sat = job
    out = []
    k0X = im.relative(n, [x.label for x in X], sat)
    quot = present(T.labels, im.n_subgroup(T, X).generators)
    same = quot.canonical() == k0X.group.canonical()
    try:
        im.g_iso(T, X, k0X)
        iso = True
    except im.IdentityViolation:
        iso = False
    tag = f"n={n} T={T.labels} X={[x.label for x in X]}"
    out.append((f"invariants {tag}", same,
                None if same else [quot.describe(), k0X.group.describe()]))
    out.append((f"G_X iso {tag}", iso, None))
    return out


def _task_index(job):
    n, T, X, sat = job
    k0T = im.relative(n, T.labels, sat)
    tag = f"n={n} T={T.labels}"
    free = k0T.group.canonical() == ((), n)
    try:
        im.L_hom(T, k0T)
        inverse = True
    except (im.IdentityViolation, AbelianError):
        inverse = False
    return [(f"free rank {n} {tag}", free, None if free else k0T.group.describe()),
            (f"L inverse to index {tag}", inverse, None)]


def _task_diagram(job):
    n, T, X, sat = job
    tag = f"n={n} T={T.labels} X={[x.label for x in X]}"
    try:
        b = im.bundle(T, X, sat)
    except im.IdentityViolation as exc:
        return [(f"diagram {tag}", False, str(exc))]
    fails = b.failures()
    out = [(f"diagram {tag}", not fails, fails or None)]
    bad = []
    objs = [am.ObjClass.of(a) for a in am.arcs(n)]
    objs += [am.ObjClass(p) for p in itertools.combinations_with_replacement(am.arcs(n), 2)]
    objs.append(am.ObjClass())
    for C in objs:
        lhs, rhs = im.psi_identity_sides(b, C)
        if not b.k0_X.group.equal(lhs, rhs):
            bad.append(repr(C))
    out.append((f"psi identity {tag}", not bad, bad or None))
    return out


def _task_index_error(job):
    n, T, X, sat = job
    tris, _ = am.generated_triangles(n, sat + 1)
    bad = []
    for tri in tris:
        lhs, rhs = im.index_error_sides(T, tri)
        if lhs != rhs:
            bad.append(repr(tri))
    for t in T:
        e = K0Element.basis_vector(am.simple_label(t))
        for tri in tris:
            if tri.image_dims(T.arcs) == e:
                lhs, _ = im.index_error_sides(T, tri)
                if lhs != im.theta_on_simple(T, t):
                    bad.append(f"theta {t} via {tri!r}")
    return [(f"index error n={n} T={T.labels}", not bad, bad[:5] or None)]


def _task_frieze(job):
    n, T, X, sat = job
    b = im.bundle(T, X, sat)
    g = cc.frieze(cc.trivial_epsilon(b.k0_X.group, tuple(T.labels)), b)
    tag = f"n={n} T={T.labels} X={[x.label for x in X]}"
    return [(f"frieze {tag}", g.passed, g.failures()[:3] or None)]


def _task_model(job):
    n, T, X, sat = job
    A = am.arcs(n)
    bad = [(a.label, b.label) for a in A for b in A
           if am.hom_dim(a, am.suspend(b, -2)) != am.hom_dim(b, am.suspend(a, -2))]
    out = [(f"2-CY symmetry n={n}", not bad, bad[:5] or None)]
    if T is not None:
        C = im.category(n)
        for r in range(len(T) + 1):
            for xs in itertools.combinations(T.arcs, r):
                D = [x.label for x in xs]
                same = ex.saturation_lattices_agree(C, D, sat, sat + 1)
                out.append((f"saturation {sat} vs {sat + 1} n={n} D={D}", same, None))
    return out


_TASKS: Dict[str, Tuple[Callable, bool, bool]] = {
    # name: (task, all subsets of T, one job per triangulation)
    "thm-a": (_task_gx_iso, True, False),
    "index": (_task_index, False, True),
    "diagram": (_task_diagram, True, False),
    "thm-c": (_task_index_error, False, True),
    "frieze": (_task_frieze, True, False),
}


def _run_jobs(task, jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(task, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [task(j) for j in jobs]


def cmd_verify(args) -> Tuple[Report, str]:
    which = args.which
    if args.n is None:
        raise UsageError("--n is required")
    ns = list(range(2 if args.n >= 2 else 1, args.bound + 1)) if args.bound else [args.n]
    suites = [s for s in VERIFY_SUITES if s != "all"] if which == "all" else [which]
    rep = Report("verify", {"which": which, "n": ns, "saturation": args.saturation,
                            "T": args.t, "X": args.x})
    for n in ns:
        am._check_bound(n)
        N = n + 3
        T = am.Triangulation(_arc_list(args.t, N), N) if args.t else None
        X = tuple(sorted(_arc_list(args.x, N))) if args.x is not None else None
        for suite in suites:
            if suite == "model":
                results = _task_model((n, None, None, args.saturation))
                if n <= 4 or T is not None:
                    seen = set()
                    for t in [T] if T is not None else am.enumerate_triangulations(n):
                        for name, passed, w in _task_model((n, t, None, args.saturation))[1:]:
                            if name not in seen:
                                seen.add(name)
                                results.append((name, passed, w))
                for name, passed, w in results:
                    rep.check(name, passed, w)
                continue
            task, subsets, per_T = _TASKS[suite]
            if suite == "frieze" and X is None and args.t is None:
                pairs = _pairs(n, T, None, False) + [
                    p for p in _pairs(n, T, None, True) if len(p[1]) < n]
            else:
                pairs = _pairs(n, T, X, subsets and not per_T)
            jobs = [(n, t, xs, args.saturation) for t, xs in pairs]
            for res in _run_jobs(task, jobs, args.jobs):
                for name, passed, w in res:
                    rep.check(name, passed, w)
    rep.summary["passed"] = sum(c["passed"] for c in rep.checks)
    rep.summary["failed"] = sum(not c["passed"] for c in rep.checks)
    return rep, ""


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="polygon has n+3 vertices (type A_n)")
    common.add_argument("--t", help="triangulation as comma-separated arcs, e.g. 1-3,1-4")
    common.add_argument("--x", help="subset of the triangulation (comma-separated arcs)")
    common.add_argument("--saturation", type=int, default=ex.DEFAULT_SATURATION,
                        help="relation bound: end terms with at most saturation+1 summands")
    common.add_argument("--epsilon", default="trivial",
                        help="exponential map: trivial, variables, or a JSON file")
    common.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--bound", type=int, help="sweep every n up to this bound")
    common.add_argument("--timing", action="store_true", help="report elapsed time")

    p = argparse.ArgumentParser(prog="exangulate",
                                description="Relative Grothendieck groups of cluster categories.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gen", parents=[common], help="write the generated category as JSON")
    g.add_argument("-o", "--output", help="output file (default: stdout)")
    k = sub.add_parser("k0", parents=[common], help="relative Grothendieck group")
    k.add_argument("--category", help="use a category file instead of the polygon model")
    sub.add_parser("index", parents=[common], help="index of every arc")
    sub.add_parser("theta", parents=[common], help="theta on the simple modules")
    m = sub.add_parser("mutate", parents=[common], help="exchange triangles")
    m.add_argument("--arc", help="arcs of T to flip (default: all)")
    sub.add_parser("nx", parents=[common], help="generators of N_X and the quotient")
    sub.add_parser("cc", parents=[common], help="character values per arc")
    sub.add_parser("frieze", parents=[common], help="frieze grid with rule checks")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("which", choices=VERIFY_SUITES)
    ld = sub.add_parser("load", parents=[common], help="validate a category file")
    ld.add_argument("file")
    return p


_COMMANDS = {
    "gen": cmd_gen, "k0": cmd_k0, "index": cmd_index, "theta": cmd_theta,
    "mutate": cmd_mutate, "nx": cmd_nx, "cc": cmd_cc, "frieze": cmd_frieze,
    "verify": cmd_verify, "load": cmd_load,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep, text = _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ex.ExangError, am.ArcModelError, cc.EpsilonError, AbelianError,
            im.IdentityViolation, OSError) as exc:
        print(f"exangulate: error: {exc}", file=sys.stderr)
        return 1
    if rep is None:
        sys.stdout.write(text)
        return 0
    if args.timing:
        rep.timing = round(time.perf_counter() - start, 3)
    sys.stdout.write(rep.render(args.format))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
