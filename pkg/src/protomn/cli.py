"""Batch command-line front end.

Subcommands mirror the library workflow: lift a code, compute threshold
tables, scan growth rates, classify an ensemble, evaluate union bounds, run
the ensemble designer, simulate FER campaigns, and bundle plot-ready
reports. Every command writes its outputs plus a manifest.json into --out;
reruns with the same arguments, config and seeds produce byte-identical
files. PROTOMN_WORKERS overrides the simulation worker count (aggregate
counts do not depend on it).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from . import catalog
from .bounds import SpectrumList, low_weight_search, tub_code, union_bound_ensemble
from .campaign import CampaignConfig, run_fer_campaign, snr_grid
from .channels import ChannelParams
from .de import threshold_table
from .decoder import DecoderConfig
from .designer import DesignSpec, design_search
from .lifting import lift_circulant_peg, lift_uniform_random, save_code
from .matcher import DmConfig, k_for_rate
from .protograph import BaseMatrix, load_base_matrix, save_base_matrix
from .reports import emit_reports, write_dat, write_manifest, _sha256
from .spectrum import classify_ensemble, growth_grid


def _load_base(spec: str, rel_to: Path | None = None) -> BaseMatrix:
    """Resolve a base matrix: catalog name, or JSON file path."""
    if spec in catalog.names():
        return catalog.get(spec)
    p = Path(spec)
    if not p.is_absolute() and rel_to is not None and (rel_to / p).exists():
        p = rel_to / p
    if p.exists():
        return load_base_matrix(p)
    raise SystemExit(
        f"unknown base matrix {spec!r}: not in catalog {catalog.names()} "
        "and no such file")


def _parse_floats(text: str) -> tuple:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise SystemExit(f"bad float list {text!r}: {exc}")


def _parse_snrs(text: str) -> tuple:
    """Either 'start:stop:step' or a comma list of dB values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SystemExit(f"bad SNR range {text!r}, want start:stop:step")
        start, stop, step = (float(p) for p in parts)
        return snr_grid(start, stop, step)
    return _parse_floats(text)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _finish(out: Path, inputs: dict, files: list, extra: dict | None = None) -> None:
    hashes = {Path(f).name: _sha256(f) for f in files}
    write_manifest(out / "manifest.json", inputs, hashes, extra)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_lift(args) -> int:
    out = _outdir(args)
    base = _load_base(args.base)
    lifter = lift_circulant_peg if args.method == "peg" else lift_uniform_random
    code = lifter(base, args.ell, seed=args.seed)
    alist_path, meta_path = save_code(code, out / "code")
    base_path = out / "base.json"
    save_base_matrix(base, base_path)
    print(f"lifted {args.base}: n={code.n} h={code.h} checks={code.num_checks}")
    _finish(out, {
        "command": "lift", "base": args.base, "ell": args.ell,
        "seed": args.seed, "method": args.method,
    }, [alist_path, meta_path, base_path])
    return 0


def cmd_threshold(args) -> int:
    out = _outdir(args)
    base = _load_base(args.base)
    rates = _parse_floats(args.rates)
    methods = ["quantized_de", "pexit"] if args.method == "both" else [args.method]
    tables = {m: threshold_table(base, rates, method=m) for m in methods}
    for m in methods:
        for pt in tables[m]:
            print(f"{m} R={pt.rate:g}: gamma*={pt.gamma_star_db:.2f} dB "
                  f"(shannon {pt.shannon_db:.2f}, gap {pt.gap_db:.2f})")
    files = emit_reports(out, thresholds=tables, inputs={
        "command": "threshold", "base": args.base, "rates": list(rates),
        "method": args.method,
    })
    return 0 if files else 1


def cmd_growth(args) -> int:
    out = _outdir(args)
    base = _load_base(args.base)
    pts = growth_grid(base.protograph(), args.alpha_max, args.beta_max, args.step)
    emit_reports(out, growth=pts, inputs={
        "command": "growth", "base": args.base, "alpha_max": args.alpha_max,
        "beta_max": args.beta_max, "step": args.step,
    })
    print(f"growth grid: {len(pts)} points")
    return 0


def cmd_classify(args) -> int:
    out = _outdir(args)
    base = _load_base(args.base)
    label = classify_ensemble(base.protograph(), xi=args.xi, step=args.step)
    doc = {"base": args.base, "label": label, "xi": args.xi, "step": args.step}
    path = out / "classification.json"
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    _finish(out, {"command": "classify", "base": args.base, "xi": args.xi,
                  "step": args.step}, [path])
    print(f"{args.base}: {label}")
    return 0


def cmd_tub(args) -> int:
    out = _outdir(args)
    base = _load_base(args.base)
    snrs = _parse_snrs(args.snr)
    h = base.h0 * args.ell
    k = k_for_rate(h, args.rate, base.rate_inner)
    cfg = DmConfig(h, k)
    inputs = {
        "command": "tub", "base": args.base, "ell": args.ell,
        "rate": args.rate, "snr": args.snr, "k": k,
    }
    pts = []
    if args.spectrum:
        with open(args.spectrum) as fh:
            slist = SpectrumList.from_json(json.load(fh))
        inputs["spectrum"] = str(args.spectrum)
        for snr in snrs:
            pts.append((snr, tub_code(slist, cfg, ChannelParams(snr))))
    else:
        inputs["a_cap"], inputs["b_cap"] = args.a_cap, args.b_cap
        omega = k / h
        for snr in snrs:
            ub = union_bound_ensemble(base.protograph(), args.ell, omega,
                                      ChannelParams(snr),
                                      (args.a_cap, args.b_cap))
            pts.append((snr, ub.value))
    emit_reports(out, tub=pts, inputs=inputs)
    for snr, val in pts:
        print(f"{snr:g} dB: {val:.3e}")
    return 0


def cmd_design(args) -> int:
    out = _outdir(args)
    rates = _parse_floats(args.rates)
    spec = DesignSpec(h0=args.h0, n0=args.n0, rate_set=rates,
                      entry_cap=args.entry_cap, require_good=args.require_good,
                      population=args.population, generations=args.generations,
                      seed=args.seed)
    initial = [_load_base(b) for b in args.initial.split(",")] if args.initial else None
    ranked = design_search(spec, initial=initial)
    doc = {
        "spec": {"h0": spec.h0, "n0": spec.n0, "rate_set": list(spec.rate_set),
                 "entry_cap": spec.entry_cap, "require_good": spec.require_good,
                 "population": spec.population, "generations": spec.generations,
                 "seed": spec.seed},
        "candidates": [
            {"rows": [list(r) for r in c.base.entries], "h0": c.base.h0,
             "wcl_db": round(c.wcl_db, 4),
             "classification": c.classification,
             "gaps": [{"rate": g.rate, "gamma_db": round(g.gamma_db, 4),
                       "gap_db": round(g.gap_db, 4)} for g in c.gaps]}
            for c in ranked[: args.top]
        ],
    }
    path = out / "design.json"
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    best_path = out / "best.json"
    save_base_matrix(ranked[0].base, best_path)
    _finish(out, {"command": "design", **doc["spec"]}, [path, best_path])
    for c in ranked[: args.top]:
        print(f"wcl={c.wcl_db:.3f} dB class={c.classification} "
              f"rows={[list(r) for r in c.base.entries]}")
    return 0


def _campaign_from_config(path: Path) -> tuple:
    """Parse a TOML/JSON campaign file into (CampaignConfig, raw dict)."""
    if path.suffix.lower() == ".toml":
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    else:
        with open(path) as fh:
            raw = json.load(fh)
    base = _load_base(str(raw["base"]), rel_to=path.parent)
    if "snrs" in raw:
        snrs = tuple(float(s) for s in raw["snrs"])
    else:
        g = raw["snr"]
        snrs = snr_grid(float(g["start"]), float(g["stop"]), float(g["step"]))
    dec = DecoderConfig(**raw.get("decoder", {}))
    workers = int(os.environ.get("PROTOMN_WORKERS", raw.get("workers", 1)))
    cfg = CampaignConfig(
        base=base,
        ell=int(raw["ell"]),
        rates=tuple(float(r) for r in raw["rates"]),
        snrs=snrs,
        lift_seed=int(raw.get("lift_seed", 0)),
        lift_method=str(raw.get("lift_method", "peg")),
        max_frames=int(raw.get("max_frames", 1_000_000)),
        max_errors=int(raw.get("max_errors", 100)),
        decoder=dec,
        seed=int(raw.get("seed", 0)),
        mode=str(raw.get("mode", "message")),
        chunk_frames=int(raw.get("chunk_frames", 500)),
        workers=workers,
        base_file=str(raw["base"]),
    )
    return cfg, raw


def cmd_simulate(args) -> int:
    out = _outdir(args)
    cfg, raw = _campaign_from_config(Path(args.config))

    def progress(row):
        print(f"R={row.rate:g} {row.snr_db:g} dB: fer={row.fer:.3e} "
              f"({row.frame_errors}/{row.frames})", file=sys.stderr)

    run = run_fer_campaign(cfg, progress=progress if args.verbose else None)
    inputs = dict(raw)
    inputs["command"] = "simulate"
    inputs["workers"] = cfg.workers
    emit_reports(out, results=run, inputs=inputs)
    for msg in run.failures:
        print(f"cell failed: {msg}", file=sys.stderr)
    print(f"{len(run.rows)} cells done, {len(run.failures)} failed")
    return 0 if run.complete else 1


def cmd_report(args) -> int:
    out = _outdir(args)
    curves = []
    inputs: dict = {"command": "report"}
    if args.results:
        inputs["results"] = str(args.results)
        by_rate: dict = {}
        with open(args.results, newline="") as fh:
            for row in csv.DictReader(fh):
                by_rate.setdefault(row["rate"], []).append(
                    (float(row["snr_db"]), float(row["fer"])))
        for rate in sorted(by_rate, key=float):
            curves.append((f"fer R={rate}", sorted(by_rate[rate])))
    if args.tub:
        inputs["tub"] = str(args.tub)
        with open(args.tub, newline="") as fh:
            pts = [(float(r["snr_db"]), float(r["tub"]))
                   for r in csv.DictReader(fh)]
        curves.append(("tub", sorted(pts)))
    if not curves:
        raise SystemExit("report needs --results and/or --tub")
    path = out / "curves.dat"
    write_dat(curves, path)
    _finish(out, inputs, [path])
    print(f"wrote {path} ({len(curves)} blocks)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="protomn",
        description="Rate-adaptive protograph MacKay-Neal code workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--out", default=".", help="output directory")
        return p

    p = add("lift", cmd_lift, "lift a base matrix into a code (alist + json)")
    p.add_argument("--base", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("peg", "uniform"), default="peg")

    p = add("threshold", cmd_threshold, "DE/PEXIT threshold table over rates")
    p.add_argument("--base", required=True)
    p.add_argument("--rates", required=True, help="comma list, e.g. 0.5,0.4")
    p.add_argument("--method", choices=("quantized_de", "pexit", "both"),
                   default="both")

    p = add("growth", cmd_growth, "growth-rate grid G(alpha, beta)")
    p.add_argument("--base", required=True)
    p.add_argument("--alpha-max", type=float, required=True)
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--step", type=float, required=True)

    p = add("classify", cmd_classify, "good/bad ensemble classification")
    p.add_argument("--base", required=True)
    p.add_argument("--xi", type=float, default=0.02)
    p.add_argument("--step", type=float, default=1e-3)

    p = add("tub", cmd_tub, "truncated union bound vs SNR")
    p.add_argument("--base", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--snr", required=True, help="start:stop:step or comma list")
    p.add_argument("--a-cap", type=int, default=10)
    p.add_argument("--b-cap", type=int, default=30)
    p.add_argument("--spectrum", default=None,
                   help="code spectrum json for a code-specific TUB")

    p = add("design", cmd_design, "differential-evolution base-matrix search")
    p.add_argument("--h0", type=int, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--rates", required=True)
    p.add_argument("--entry-cap", type=int, default=3)
    p.add_argument("--require-good", action="store_true")
    p.add_argument("--population", type=int, default=40)
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--initial", default=None,
                   help="comma list of seed base matrices (catalog or files)")

    p = add("simulate", cmd_simulate, "FER campaign from a TOML/JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--verbose", action="store_true")

    p = add("report", cmd_report, "bundle CSVs into gnuplot-ready curves.dat")
    p.add_argument("--results", default=None)
    p.add_argument("--tub", default=None)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
