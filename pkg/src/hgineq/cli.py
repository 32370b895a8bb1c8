"""Command line front end.

Subcommands:
    verify     run the verification suite from a config, write JSON-lines report
    sharpness  run ratio curves and the double-log asymptotics, write CSV/JSONL
    describe   print a verifier's statement and parameters
    list       list available verifiers

Reports are deterministic: lines sort by (theorem_id, group, parameters) and
carry no timestamps (wall-clock metadata goes to a separate file), so two runs
with the same config and seed produce byte-identical report files.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .catalog import VERIFIERS, describe_verifier
from .config import DEFAULT_CONFIG_PATH, SuiteConfig, load_config, profile_library
from .errors import ConfigError
from .groups import BUILTIN_GROUPS
from .sharpness import (LogPowerCutoffFamily, PowerCutoffFamily,
                        SlzSequenceFamily, ratio_curve, slz_asymptotics)

__all__ = ["main", "run_verify_suite", "run_sharpness_suite"]


def _jobs_default() -> int:
    env = os.environ.get("HGINEQ_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _build_cells(cfg: SuiteConfig):
    lib = profile_library(cfg.grid)
    cells = []
    for entry in cfg.theorems:
        vid = entry.verifier_id
        fn = VERIFIERS[vid]["fn"]
        prof_names = entry.profiles if entry.profiles is not None else cfg.profiles
        for group in cfg.groups:
            for combo in entry.combos:
                if vid == "embedding":
                    suite = [lib[n] for n in prof_names]
                    cells.append((vid, group, dict(combo),
                                  lambda f=fn, g=group, c=combo, s=suite:
                                  f(g, s, tol=cfg.tolerances, **c)))
                    continue
                for name in prof_names:
                    prof = lib[name]
                    kwargs = dict(combo)
                    if vid == "polar_mc":
                        kwargs.setdefault("seed", cfg.seed)
                        kwargs.setdefault("n_sigma", cfg.mc_sigma)
                    cells.append((vid, group, {**combo, "profile": name},
                                  lambda f=fn, g=group, p=prof, k=kwargs:
                                  f(g, p, tol=cfg.tolerances, **k)))
    return cells


def _run_cell(cell):
    vid, group, params, runner = cell
    gname = group.name or str(group)
    try:
        report = runner()
        return report.to_dict()
    except Exception as exc:  # a cell failure must not kill the suite
        return {
            "schema_version": 1,
            "theorem_id": vid,
            "group": gname,
            "parameters": {k: (v if not isinstance(v, complex)
                               else [v.real, v.imag]) for k, v in params.items()},
            "lhs": None, "rhs": None, "remainder": None, "residual": None,
            "margin": None, "status": "fail", "details": {},
            "grid_meta": {}, "notes": [f"{type(exc).__name__}: {exc}"],
        }


def _sort_key(line: dict):
    return (line["theorem_id"], line["group"],
            json.dumps(line["parameters"], sort_keys=True, default=str))


def run_verify_suite(cfg: SuiteConfig, out_dir: Path, jobs: int = 1) -> int:
    cfg.validate()
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    cells = _build_cells(cfg)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            lines = list(pool.map(_run_cell, cells))
    else:
        lines = [_run_cell(c) for c in cells]
    lines.sort(key=_sort_key)
    report_path = out_dir / "report.jsonl"
    with report_path.open("w") as fh:
        for line in lines:
            fh.write(json.dumps(line, sort_keys=True, default=str) + "\n")
    counts = {}
    for line in lines:
        counts[line["status"]] = counts.get(line["status"], 0) + 1
    meta = {
        "kind": "verify",
        "cells": len(lines),
        "status_counts": counts,
        "seed": cfg.seed,
        "jobs": jobs,
        "runtime_seconds": round(time.time() - t0, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    (out_dir / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n")
    for line in lines:
        if line["status"] != "pass":
            print(f"FAIL {line['theorem_id']} {line['group']} "
                  f"{line['parameters']}: status={line['status']} "
                  f"notes={line.get('notes')}")
    print(f"verify: {len(lines)} cells, {counts.get('pass', 0)} pass, "
          f"{counts.get('fail', 0)} fail, "
          f"{counts.get('inconclusive', 0)} inconclusive -> {report_path}")
    return 0 if counts.get("fail", 0) == 0 and counts.get("inconclusive", 0) == 0 else 1


_FAMILIES = {
    "power_cutoff": lambda group, entry: PowerCutoffFamily(
        group, p=entry.get("p", 2.0), alpha=entry.get("alpha", 0.0)),
    "log_power_cutoff": lambda group, entry: LogPowerCutoffFamily(
        group, p=entry.get("p", 2.0)),
    "slz_fl": lambda group, entry: SlzSequenceFamily(
        entry.get("q", 2.0), entry.get("gamma", 2.0), entry.get("R", 1.0)),
}


def run_sharpness_suite(cfg: SuiteConfig, out_dir: Path) -> int:
    cfg.validate()
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    failures = []
    rows = []
    for i, entry in enumerate(cfg.sharpness.get("curves", [])):
        fam_name = entry.get("family")
        if fam_name not in _FAMILIES:
            raise ConfigError(f"sharpness.curves[{i}].family: unknown family "
                              f"{fam_name!r}")
        gname = entry.get("group")
        group = next((g for g in cfg.groups if g.name == gname),
                     BUILTIN_GROUPS.get(gname))
        if group is None:
            raise ConfigError(f"sharpness.curves[{i}].group: unknown group "
                              f"{gname!r}")
        family = _FAMILIES[fam_name](group, entry)
        curve = ratio_curve(family, entry["verifier"], group, tol=cfg.tolerances)
        ok = curve.no_violation() and curve.monotone_increasing()
        if not ok:
            failures.append(f"curve {fam_name}/{entry['verifier']}/{gname}")
        for row in curve.rows():
            rows.append({"family": fam_name, "verifier": entry["verifier"],
                         "group": gname, **row})
    curves_path = out_dir / "ratio_curves.csv"
    fields = sorted({k for row in rows for k in row})
    with curves_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in sorted(rows, key=lambda r: json.dumps(r, sort_keys=True,
                                                         default=str)):
            writer.writerow(row)

    slz_lines = []
    for i, entry in enumerate(cfg.sharpness.get("slz", [])):
        gname = entry.get("group")
        group = next((g for g in cfg.groups if g.name == gname),
                     BUILTIN_GROUPS.get(gname))
        if group is None:
            raise ConfigError(f"sharpness.slz[{i}].group: unknown group {gname!r}")
        for ell in entry.get("ell", [1e4]):
            rec = slz_asymptotics(group, entry.get("q", 2.0),
                                  entry.get("gamma", 2.0),
                                  entry.get("R", 1.0), ell)
            ok = (rec.rel_err_gradient <= 1e-4 and rec.rel_err_difference <= 1e-4
                  and rec.margin >= 0.0)
            if not ok:
                failures.append(f"slz asymptotics ell={ell:g} on {gname}")
            slz_lines.append({
                "group": gname, "q": entry.get("q", 2.0),
                "gamma": entry.get("gamma", 2.0), "R": entry.get("R", 1.0),
                "ell": ell, "quad_gradient": rec.quad_gradient,
                "quad_difference": rec.quad_difference,
                "closed_gradient": rec.closed.gradient_side,
                "closed_difference": rec.closed.difference_side,
                "rel_err_gradient": rec.rel_err_gradient,
                "rel_err_difference": rec.rel_err_difference,
                "quotient": rec.quotient, "quotient_limit": rec.quotient_limit,
                "status": "pass" if ok else "fail",
            })
    slz_path = out_dir / "slz_asymptotics.jsonl"
    with slz_path.open("w") as fh:
        for line in sorted(slz_lines, key=lambda r: json.dumps(r, sort_keys=True)):
            fh.write(json.dumps(line, sort_keys=True) + "\n")
    meta = {
        "kind": "sharpness",
        "curve_rows": len(rows),
        "slz_records": len(slz_lines),
        "failures": failures,
        "runtime_seconds": round(time.time() - t0, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    (out_dir / "metadata_sharpness.json").write_text(json.dumps(meta, indent=2) + "\n")
    for f in failures:
        print(f"FAIL {f}")
    print(f"sharpness: {len(rows)} curve rows, {len(slz_lines)} asymptotic "
          f"records -> {curves_path}, {slz_path}")
    return 0 if not failures else 1


def _apply_overrides(cfg: SuiteConfig, args) -> SuiteConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    tol = cfg.tolerances
    if args.tol_identity is not None:
        tol = replace(tol, identity_rel=args.tol_identity)
    cfg.tolerances = tol
    if args.grid_n is not None:
        from .profiles import LogGrid
        try:
            cfg.grid = LogGrid(cfg.grid.u_min, cfg.grid.u_max, args.grid_n)
        except ValueError as exc:
            raise ConfigError(f"--grid-n: {exc}") from None
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hgineq",
        description="Numerical verification of Euler-operator functional "
                    "inequalities on anisotropic dilation structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, default=DEFAULT_CONFIG_PATH,
                       help="TOML (or JSON) suite config")
        p.add_argument("--out", type=Path, default=Path("hgineq_out"),
                       help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--jobs", type=int, default=_jobs_default(),
                       help="worker threads (env HGINEQ_JOBS)")
        p.add_argument("--tol-identity", type=float, default=None,
                       dest="tol_identity")
        p.add_argument("--grid-n", type=int, default=None, dest="grid_n")

    add_common(sub.add_parser("verify", help="run the verification suite"))
    add_common(sub.add_parser("sharpness", help="run sharpness probes"))
    d = sub.add_parser("describe", help="describe one verifier")
    d.add_argument("verifier_id")
    sub.add_parser("list", help="list verifiers")

    args = parser.parse_args(argv)
    if args.command == "describe":
        try:
            print(describe_verifier(args.verifier_id))
        except KeyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    if args.command == "list":
        for vid in sorted(VERIFIERS):
            print(f"{vid:14s} {VERIFIERS[vid]['kind']}")
        return 0
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "verify":
            return run_verify_suite(cfg, args.out, jobs=args.jobs)
        return run_sharpness_suite(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
