"""Command-line front end: ``sdhall {cartan,hallnum,verify,identities}``."""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import report as rpt
from .identities import IDENTITIES, VARIANTS, identity_sides
from .presentations import (
    PhiMap, PresentationError, PsiMap, VerificationResult, default_lambda_table, perturb_relation,
    phi_independence_rank, relations_qbb, relations_qkm, validate_charge, verify_relation,
)
from .quiver import Quiver, QuiverError, cartan_from_quiver, parse_quiver
from .reps import Budget, RepCategory, ResourceError
from .sdh import SDHContext


class ConfigError(ValueError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n ** 0.5) + 1))


def quiver_to_text(Q: Quiver) -> str:
    lines = ["vertices: " + " ".join(str(v) for v in Q.vertices)]
    lines += ["arrow: %s %s" % a for a in Q.arrows]
    return "\n".join(lines) + "\n"


def parse_lambda_table(text: str) -> dict:
    """Lines ``lambda: <vertex> <scalars...>``; one line per level, in order."""
    table: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip().lower() != "lambda":
            raise ConfigError("lambda table line %d: expected 'lambda: <vertex> <scalars...>'" % lineno)
        try:
            vals = [int(x) for x in rest.split()]
        except ValueError:
            raise ConfigError("lambda table line %d: entries must be integers" % lineno) from None
        if not vals:
            raise ConfigError("lambda table line %d: missing vertex" % lineno)
        table.setdefault(vals[0], []).append(tuple(vals[1:]))
    return table


def parse_charge(text: str) -> dict:
    """``1=2,2=1`` -> {1: 2, 2: 1}."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        k, sep, v = part.partition("=")
        if not sep:
            raise ConfigError("charge entries look like vertex=m, got %r" % part)
        try:
            out[int(k)] = int(v)
        except ValueError:
            raise ConfigError("charge entries must be integers, got %r" % part) from None
    return out


def parse_budget(text: str | None) -> dict:
    names = {f.name for f in dataclasses.fields(Budget)}
    out = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        k, sep, v = part.partition("=")
        if not sep or k not in names:
            raise ConfigError("budget entries look like name=int with name in %s" % sorted(names))
        try:
            out[k] = int(v)
        except ValueError:
            raise ConfigError("budget value for %s must be an integer" % k) from None
    return out


@dataclass
class RunConfig:
    command: str
    quiver: str
    qs: list = field(default_factory=lambda: [2])
    mode: str = "qbb"
    lmax: int = 2
    charge: dict | None = None
    lambda_table: dict | None = None
    budget: dict = field(default_factory=dict)
    method: str = "count"
    variant: str = "corrected"
    vertices: list | None = None
    serre: bool = True

    def quiver_obj(self) -> Quiver:
        return parse_quiver(self.quiver)

    def budget_obj(self) -> Budget:
        return Budget(**self.budget)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key in ("charge", "lambda_table"):
            if d[key] is not None:
                d[key] = {str(k): v for k, v in sorted(d[key].items())}
        if d["lambda_table"] is not None:
            d["lambda_table"] = {k: [list(r) for r in rows] for k, rows in d["lambda_table"].items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        if d.get("charge") is not None:
            d["charge"] = {int(k): int(v) for k, v in d["charge"].items()}
        if d.get("lambda_table") is not None:
            d["lambda_table"] = {int(k): [tuple(r) for r in rows] for k, rows in d["lambda_table"].items()}
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})

    def validate(self) -> None:
        Q = self.quiver_obj()
        for q in self.qs:
            if not is_prime(q):
                raise ConfigError("q = %d is not prime" % q)
        if self.lmax < 1:
            raise ConfigError("lmax must be positive")
        if self.command == "verify" and self.mode not in ("qbb", "qkm"):
            raise ConfigError("verify mode must be qbb or qkm")
        if self.command == "verify" and self.mode == "qkm":
            for q in self.qs:
                self.psi_table(Q, q)

    def psi_table(self, Q: Quiver, q: int) -> dict:
        A = cartan_from_quiver(Q)
        if self.lambda_table is not None:
            table = self.lambda_table
            for i, rows in table.items():
                if len(set(rows)) != len(rows):
                    raise ConfigError("duplicate lambda rows at vertex %s" % i)
            if self.charge is not None:
                for i in Q.vertices:
                    given = len(table.get(i, [()])) if Q.loops(i) == 0 else len(table.get(i, []))
                    if self.charge.get(i, 1) != given:
                        raise ConfigError("charge at vertex %s disagrees with the lambda table" % i)
            table = {i: table.get(i, [()] if Q.loops(i) == 0 else []) for i in Q.vertices}
        else:
            charge = self.charge or {}
            try:
                validate_charge(A, charge, Q, q)
            except PresentationError as exc:
                raise ConfigError(str(exc)) from None
            table = default_lambda_table(Q, q, charge)
        try:
            validate_charge(A, {i: len(r) for i, r in table.items()}, Q, q)
        except PresentationError as exc:
            raise ConfigError(str(exc)) from None
        return table


# workers (module level so they pickle)

def _relations(cfg: RunConfig, Q: Quiver, q: int):
    A = cartan_from_quiver(Q, cfg.lmax)
    if cfg.mode == "qbb":
        ctx = SDHContext(Q, q, "nilpotent", cfg.budget_obj(), cfg.method)
        return ctx, PhiMap(ctx), relations_qbb(A, cfg.lmax, serre=cfg.serre)
    ctx = SDHContext(Q, q, "modified", cfg.budget_obj(), cfg.method)
    psi = PsiMap(ctx, cfg.psi_table(Q, q))
    return ctx, psi, relations_qkm(A, psi.charge)


def _verify_chunk(cfg_dict: dict, q: int, start: int, stop: int) -> list:
    cfg = RunConfig.from_dict(cfg_dict)
    ctx, image, rels = _relations(cfg, cfg.quiver_obj(), q)
    out = []
    for idx in range(start, stop):
        res = _safe_verify(rels[idx], image)
        rec = res.record()
        rec["params"]["q"] = q
        out.append((q, idx, rec, res.seconds))
    return out


def _safe_verify(rel, image):
    try:
        return verify_relation(rel, image)
    except ResourceError as exc:
        return VerificationResult(rel, "error", None, "ResourceError: %s" % exc)


def _identity_chunk(cfg_dict: dict, q: int, items: list) -> list:
    cfg = RunConfig.from_dict(cfg_dict)
    Q = cfg.quiver_obj()
    ctx = SDHContext(Q, q, "nilpotent", cfg.budget_obj(), cfg.method)
    out = []
    for pos, (name, i, k, l, variant) in items:
        t0 = time.perf_counter()
        rec = {"id": name, "params": {"q": q, "i": i, "k": k, "l": l, "variant": variant}}
        try:
            lhs, rhs = identity_sides(ctx, name, i, k, l, variant)
            res = lhs - rhs
            rec["status"] = "zero" if res.is_zero() else "nonzero"
            if not res.is_zero():
                rec["residual"] = res.to_records()
        except (ResourceError, ValueError, ArithmeticError) as exc:
            rec["status"] = "error"
            rec["error"] = "%s: %s" % (type(exc).__name__, exc)
        out.append((q, pos, rec, time.perf_counter() - t0))
    return out


def _run_jobs(fn, jobs: list[tuple], workers: int) -> list:
    results = []
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            results.extend(fn(*job))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(fn, *zip(*jobs)):
                results.extend(chunk)
    results.sort(key=lambda r: (r[0], r[1]))
    return results


def _chunks(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    step, extra = divmod(n, parts)
    out, start = [], 0
    for p in range(parts):
        stop = start + step + (1 if p < extra else 0)
        out.append((start, stop))
        start = stop
    return [c for c in out if c[0] < c[1]]


# commands

def cmd_cartan(args) -> int:
    Q = _load_quiver(args.quiver)
    A = cartan_from_quiver(Q, args.lmax)
    width = max(len(str(x)) for row in A.entries for x in row)
    print("vertices: %s" % " ".join(str(v) for v in A.vertices))
    print("cartan matrix:")
    for row in A.entries:
        print("  [" + " ".join(str(x).rjust(width) for x in row) + "]")
    print("real: %s" % list(A.real))
    print("imaginary: %s" % list(A.imaginary))
    print("isotropic: %s" % list(A.isotropic))
    print("index set (lmax=%d): %s" % (args.lmax, A.index_set()))
    if args.out:
        rep = {"command": "cartan", "quiver": quiver_to_text(Q), "entries": [list(r) for r in A.entries],
               "real": list(A.real), "imaginary": list(A.imaginary), "isotropic": list(A.isotropic),
               "index_set": [list(x) for x in A.index_set()], "lmax": args.lmax}
        Path(args.out).write_text(rpt.dumps(rep))
    return 0


def cmd_hallnum(args) -> int:
    Q = _load_quiver(args.quiver)
    cfg = RunConfig("hallnum", quiver_to_text(Q), _qs(args), budget=parse_budget(args.budget))
    cfg.validate()
    rows = []
    t0 = time.perf_counter()
    for q in cfg.qs:
        R = RepCategory(Q, q, cfg.budget_obj())
        for Z in R.enumerate_up_to(args.bound, args.nilpotent):
            for (X, Y), n in sorted(R.subobject_profile(Z).items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1].sort_key)):
                rows.append({"q": q, "X": X.label, "Y": Y.label, "Z": Z.label,
                             "dims": [list(X.dims), list(Y.dims), list(Z.dims)], "F": n})
    rows.sort(key=lambda r: (r["q"], r["dims"][2], r["Z"], r["X"], r["Y"]))
    for r in rows:
        print("q=%d  F[%s, %s -> %s] = %d" % (r["q"], r["X"], r["Y"], r["Z"], r["F"]))
    conf = cfg.to_dict()
    conf.update(bound=args.bound, nilpotent=args.nilpotent)
    rep = rpt.build_report("hallnum", conf, [], extra={"table": rows},
                           timing={"seconds": round(time.perf_counter() - t0, 3)})
    rpt.write_report(rep, args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = _config_from_args(args, "verify")
    cfg.validate()
    Q = cfg.quiver_obj()
    workers = _workers(args)
    t0 = time.perf_counter()
    jobs = []
    extra_records = []
    controls = []
    for q in cfg.qs:
        ctx, image, rels = _relations(cfg, Q, q)
        for start, stop in _chunks(len(rels), workers):
            jobs.append((cfg.to_dict(), q, start, stop))
        target = "ef-bozec" if cfg.mode == "qbb" else "EF"
        for rel in rels:
            if rel.id == target and (cfg.mode == "qbb" or rel.params["i"] == rel.params["j"] and rel.params["k"] == rel.params["l"]):
                rec = _safe_verify(perturb_relation(rel), image).record()
                rec["params"]["q"] = q
                controls.append(rec)
                break
        if cfg.mode == "qbb":
            A = cartan_from_quiver(Q, cfg.lmax)
            for i in A.imaginary:
                rec = {"q": q, "vertex": i, "expected": 3,
                       "label": "smoke test: necessary condition for injectivity, not a proof"}
                try:
                    rec["rank"] = phi_independence_rank(ctx, i)
                except ResourceError as exc:
                    rec["rank"] = None
                    rec["error"] = "ResourceError: %s" % exc
                extra_records.append(rec)
    results = _run_jobs(_verify_chunk, jobs, workers)
    records = [r[2] for r in results]
    timing = {"total_seconds": round(time.perf_counter() - t0, 3),
              "per_relation": [[r[0], r[1], round(r[3], 4)] for r in results], "workers": workers}
    extra = {"independence": extra_records} if extra_records else None
    rep = rpt.build_report("verify", cfg.to_dict(), records, controls, extra, timing)
    rpt.write_report(rep, args.out)
    return _print_summary(rep)


def cmd_identities(args) -> int:
    cfg = _config_from_args(args, "identities")
    cfg.validate()
    Q = cfg.quiver_obj()
    workers = _workers(args)
    variants = list(VARIANTS) if cfg.variant == "both" else [cfg.variant]
    verts = cfg.vertices if cfg.vertices else list(Q.vertices)
    for v in verts:
        if v not in Q.index:
            raise ConfigError("unknown vertex %s" % v)
    t0 = time.perf_counter()
    jobs = []
    for q in cfg.qs:
        items = [(name, i, k, l, var) for var in variants for i in verts for name in IDENTITIES
                 for k in range(1, cfg.lmax + 1) for l in range(1, cfg.lmax + 1)]
        items = list(enumerate(items))
        for start, stop in _chunks(len(items), workers):
            jobs.append((cfg.to_dict(), q, items[start:stop]))
    results = _run_jobs(_identity_chunk, jobs, workers)
    records = [r[2] for r in results]
    controls = []
    for q in cfg.qs:
        ctx = SDHContext(Q, q, "nilpotent", cfg.budget_obj(), cfg.method)
        lhs, rhs = identity_sides(ctx, "c-cstar", verts[0], 1, 1)
        k0, c0 = rhs.sorted_terms()[0]
        bad = rhs + ctx.element_from({k0: c0 + 1}) - ctx.element_from({k0: c0})
        res = lhs - bad
        controls.append({"id": "c-cstar+perturbed", "params": {"q": q, "i": verts[0], "k": 1, "l": 1},
                         "status": "zero" if res.is_zero() else "nonzero", "note": "negative control"})
    timing = {"total_seconds": round(time.perf_counter() - t0, 3),
              "per_identity": [[r[0], r[1], round(r[3], 4)] for r in results], "workers": workers}
    rep = rpt.build_report("identities", cfg.to_dict(), records, controls, None, timing)
    rpt.write_report(rep, args.out)
    return _print_summary(rep)


def _print_summary(rep: dict) -> int:
    s = rep["summary"]
    for r in rep["results"]:
        if r["status"] != "zero":
            print("%s %s %s %s" % (r["status"].upper(), r["id"], r["params"], r.get("error", "")))
    for c in rep["controls"]:
        if c["status"] != "nonzero":
            print("CONTROL FAILED %s %s" % (c["id"], c["params"]))
    for r in rep.get("independence", []):
        print("independence smoke test q=%d vertex %s: rank %s of %d" % (r["q"], r["vertex"], r["rank"], r["expected"]))
    print("%s: %d checked, %d zero, %d nonzero, %d error; controls %s; %s" % (
        rep["command"], s["total"], s["zero"], s["nonzero"], s["error"],
        "ok" if s["controls_ok"] else "FAILED", "PASS" if s["passed"] else "FAIL"))
    return 0 if s["passed"] else 1


def _load_quiver(path: str) -> Quiver:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("cannot read quiver file: %s" % exc) from None
    return parse_quiver(text)


def _qs(args) -> list[int]:
    return sorted(set(args.q or [2]))


def _workers(args) -> int:
    if args.serial:
        return 1
    return args.workers or os.cpu_count() or 1


def _config_from_args(args, command: str) -> RunConfig:
    if getattr(args, "from_report", None):
        cfg = RunConfig.from_dict(rpt.load_report(args.from_report)["config"])
        if cfg.command != command:
            raise ConfigError("report was produced by %r, not %r" % (cfg.command, command))
        return cfg
    if not args.quiver:
        raise ConfigError("a quiver file is required")
    Q = _load_quiver(args.quiver)
    cfg = RunConfig(command, quiver_to_text(Q), _qs(args), lmax=args.lmax, budget=parse_budget(args.budget),
                    method=args.method)
    if command == "verify":
        cfg.mode = args.mode
        cfg.serre = not args.no_serre
        if args.charge:
            cfg.charge = parse_charge(args.charge)
        if args.lambda_table:
            cfg.lambda_table = parse_lambda_table(Path(args.lambda_table).read_text())
    else:
        cfg.variant = args.variant
        cfg.vertices = args.vertex
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdhall", description="Exact checks in semi-derived Hall algebras of quivers with loops.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cartan", help="print the Borcherds-Cartan datum of a quiver")
    c.add_argument("quiver")
    c.add_argument("--lmax", type=int, default=3)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cartan)

    def common(sp, quiver_optional=False):
        if quiver_optional:
            sp.add_argument("quiver", nargs="?")
        else:
            sp.add_argument("quiver")
        sp.add_argument("--q", type=int, action="append", help="prime field size; repeat for several")
        sp.add_argument("--budget", help="comma list name=int overriding enumeration budgets")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--serial", action="store_true", help="single process")
        sp.add_argument("--workers", type=int, help="worker processes (default: all cores)")

    h = sub.add_parser("hallnum", help="table of Hall numbers up to a total dimension")
    common(h)
    h.add_argument("--bound", type=int, default=2)
    h.add_argument("--nilpotent", action="store_true", help="only nilpotent representations")
    h.set_defaults(func=cmd_hallnum)

    v = sub.add_parser("verify", help="verify a relation matrix through Phi (qbb) or Psi (qkm)")
    common(v, quiver_optional=True)
    v.add_argument("--mode", choices=("qbb", "qkm"), default="qbb")
    v.add_argument("--lmax", type=int, default=2)
    v.add_argument("--charge", help="comma list vertex=m (qkm)")
    v.add_argument("--lambda-table", help="file with lines 'lambda: <vertex> <scalars...>' (qkm)")
    v.add_argument("--method", choices=("count", "scan"), default="count")
    v.add_argument("--no-serre", action="store_true")
    v.add_argument("--from-report", help="re-run the config echoed in an earlier report")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("identities", help="check the stalk commutation and expansion identities")
    common(i, quiver_optional=True)
    i.add_argument("--lmax", type=int, default=3)
    i.add_argument("--vertex", type=int, action="append")
    i.add_argument("--variant", choices=VARIANTS + ("both",), default="corrected")
    i.add_argument("--method", choices=("count", "scan"), default="count")
    i.add_argument("--from-report", help="re-run the config echoed in an earlier report")
    i.set_defaults(func=cmd_identities)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, QuiverError, PresentationError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ResourceError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
