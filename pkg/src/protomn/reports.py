"""Deterministic report emission: CSV datasets, gnuplot blocks, JSON manifest.

Every writer here is byte-reproducible: fixed float formats, explicit "\n"
newlines, sorted JSON keys, and no timestamps or host identifiers. A rerun
with the same inputs and seeds must produce identical files; the manifest
records the inputs, seeds, package versions and a sha256 per emitted file so
any output can be audited against the run that produced it.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from pathlib import Path

import numba
import numpy as np
import scipy

from . import __version__


def _write_text(path, text: str) -> None:
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"writing {path}: {exc}") from exc


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_results_csv(rows, path) -> None:
    """FER campaign table. wall_time is deliberately not emitted."""
    lines = ["rate,omega,snr_db,frames,frame_errors,fer,avg_iterations,"
             "undetected_errors,realized_rate"]
    for r in rows:
        lines.append(
            f"{r.rate:.6g},{r.omega:.8g},{r.snr_db:.6g},{r.frames},"
            f"{r.frame_errors},{r.fer:.8e},{r.avg_iterations:.6g},"
            f"{r.undetected_errors},{r.realized_rate:.8g}"
        )
    _write_text(path, "\n".join(lines) + "\n")


def write_threshold_table_csv(tables: dict, path) -> None:
    """Wide threshold table: one column per rate, one row per method.

    tables maps method name -> list of ThresholdPoint. All methods must
    cover the same rate set. A shannon row is appended for reference.
    """
    if not tables:
        raise ValueError("no threshold tables")
    # quantized DE row first when present, as in the reference table
    methods = sorted(tables, key=lambda m: (m != "quantized_de", m))
    rates = [pt.rate for pt in tables[methods[0]]]
    for m in methods[1:]:
        if [pt.rate for pt in tables[m]] != rates:
            raise ValueError("threshold tables cover different rate sets")
    lines = ["rate," + ",".join(f"{r:.6g}" for r in rates)]
    for m in methods:
        lines.append(m + "," + ",".join(f"{pt.gamma_star_db:.2f}"
                                        for pt in tables[m]))
    lines.append("shannon," + ",".join(f"{pt.shannon_db:.4f}"
                                       for pt in tables[methods[0]]))
    _write_text(path, "\n".join(lines) + "\n")


def write_tub_csv(points, path) -> None:
    """(snr_db, tub) pairs, one per line."""
    lines = ["snr_db,tub"]
    for snr, val in points:
        lines.append(f"{snr:.6g},{val:.8e}")
    _write_text(path, "\n".join(lines) + "\n")


def write_growth_csv(points, path) -> None:
    """(alpha, beta, G) triples from a growth-rate grid; nan = no solution."""
    lines = ["alpha,beta,G"]
    for alpha, beta, g in points:
        gtxt = "nan" if not np.isfinite(g) else f"{g:.10e}"
        lines.append(f"{alpha:.8g},{beta:.8g},{gtxt}")
    _write_text(path, "\n".join(lines) + "\n")


def write_dat(curves, path) -> None:
    """Gnuplot-compatible .dat: one block per curve, blocks in given order.

    curves is a sequence of (name, points) with points iterable of (x, y).
    Blocks are separated by two blank lines so `index n` selects a curve.
    """
    blocks = []
    for name, pts in curves:
        body = "\n".join(f"{x:.6g} {y:.8e}" for x, y in pts)
        blocks.append(f"# {name}\n{body}")
    _write_text(path, "\n\n\n".join(blocks) + "\n")


def _versions() -> dict:
    return {
        "protomn": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
    }


def write_manifest(path, inputs: dict, files: dict, extra: dict | None = None) -> None:
    """JSON manifest: inputs/seeds, package versions, sha256 per output file."""
    doc = {"inputs": inputs, "versions": _versions(), "files": files}
    if extra:
        doc.update(extra)
    _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def emit_reports(out_dir, results=None, thresholds=None, tub=None, growth=None,
                 inputs: dict | None = None, dat_curves=None,
                 extra: dict | None = None) -> list:
    """Write the provided datasets plus a manifest; return written paths.

    results: CampaignRun or iterable of ResultRow. thresholds: dict
    method -> [ThresholdPoint]. tub: [(snr_db, value)]. growth:
    [(alpha, beta, G)]. dat_curves: [(name, [(x, y)])] for an overlay file.
    At least one dataset must be given; empty ones are skipped with a
    warning and the manifest is still written.
    """
    if results is None and thresholds is None and tub is None and growth is None:
        raise ValueError("no datasets to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    inputs = dict(inputs or {})
    extra = dict(extra or {})
    written: list = []

    def emit(name, writer, data):
        p = out / name
        writer(data, p)
        written.append(p)

    if results is not None:
        rows = getattr(results, "rows", results)
        if len(rows):
            emit("results.csv", write_results_csv, rows)
        else:
            warnings.warn("no result rows; writing manifest only")
        fails = getattr(results, "failures", ())
        if fails:
            extra.setdefault("failures", list(fails))
        lift = getattr(results, "lift", None)
        if lift:
            inputs.setdefault("lift", lift)
    if thresholds is not None:
        if thresholds:
            emit("thresholds.csv", write_threshold_table_csv, thresholds)
        else:
            warnings.warn("no threshold points; writing manifest only")
    if tub is not None:
        if len(tub):
            emit("tub.csv", write_tub_csv, tub)
        else:
            warnings.warn("no tub points; writing manifest only")
    if growth is not None:
        if len(growth):
            emit("growth.csv", write_growth_csv, growth)
        else:
            warnings.warn("no growth points; writing manifest only")
    if dat_curves:
        emit("curves.dat", write_dat, dat_curves)

    files = {p.name: _sha256(p) for p in written}
    man = out / "manifest.json"
    write_manifest(man, inputs, files, extra)
    written.append(man)
    return written
