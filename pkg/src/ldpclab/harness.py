"""Experiment harness: memory sweeps, crossings, scans, and artifacts.

A memory trial prepares the zero error state, lets the Metropolis
dynamics act for a fixed number of sweeps at temperature T, hands the
final syndrome to a decoder, and scores the residual.  Sweeping T maps
out the failure probability curve whose crossing locates the memory
transition.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import math
import time
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import numpy as np

from . import decoders, dynamics, hgp
from .codes import TannerCode, sample_regular_code
from .decoders import Verdict
from .errors import ConfigError

EARLY_STOP_MIN_TRIALS = 50  # may stop a temperature early only after this many


@dataclass
class SweepRow:
    label: str
    temperature: float
    trials: int
    failures: int
    decode_failures: int

    @property
    def p_fail(self) -> float:
        return self.failures / self.trials

    @property
    def std_err(self) -> float:
        p = self.p_fail
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.trials)


def _map_trials(fn, trials: int, threads: int):
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def _sweep_temperature(label: str, T: float, trials: int, threads: int,
                       run_trial) -> SweepRow:
    """Run trials at one temperature, stopping early once every attempted
    trial has failed (the curve is pinned at 1 there anyway)."""
    failures = 0
    decode_failures = 0
    done = 0
    batch = EARLY_STOP_MIN_TRIALS
    while done < trials:
        todo = min(batch, trials - done)
        verdicts = _map_trials(lambda t: run_trial(done + t), todo, threads)
        for v in verdicts:
            if v is not Verdict.SUCCESS:
                failures += 1
            if v is Verdict.DECODE_FAILURE:
                decode_failures += 1
        done += todo
        if failures == done and done >= EARLY_STOP_MIN_TRIALS:
            break
    return SweepRow(label=label, temperature=T, trials=done,
                    failures=failures, decode_failures=decode_failures)


def run_classical_sweep(code: TannerCode, temperatures, trials: int,
                        sweeps: int, master_seed: int, bp_iters: int = 10,
                        p: float = 0.05, scale: float = 1.0,
                        threads: int = 1, label: str = "classical"):
    """Failure probability of the decoded classical memory per temperature."""
    H = code.H
    row_supports = [np.nonzero(r)[0].astype(np.int64) for r in H]

    rows = []
    for T in temperatures:
        beta = 1.0 / T

        def run_trial(t, beta=beta, T=T):
            st = dynamics.sampler_for_matrix(
                H, beta, master_seed, label, code.seed, T, t)
            st.run(sweeps)
            res = decoders.decode_bp_osd(row_supports, code.n, st.synd,
                                         iters=bp_iters, p=p, scale=scale)
            return decoders.verdict_classical(H, st.error, res.correction)

        rows.append(_sweep_temperature(label, T, trials, threads, run_trial))
    return rows


def run_quantum_sweep(css: hgp.CssCode, temperatures, trials: int,
                      sweeps: int, master_seed: int, decoder: str = "bp_osd",
                      bp_iters: int = 10, p: float = 0.05, scale: float = 1.0,
                      threads: int = 1, label: str = "quantum"):
    """X-sector memory failure probability per temperature.

    decoder: "bp_osd" (dense completion) or "bp_block" (exact block
    completion; for large products where dense elimination is too slow).
    """
    if decoder not in ("bp_osd", "bp_block"):
        raise ConfigError(f"unknown decoder {decoder!r}")
    rows_z = css.hz_rows

    rows = []
    for T in temperatures:
        beta = 1.0 / T

        def run_trial(t, beta=beta, T=T):
            st = dynamics.css_sector_sampler(css, "X", beta, master_seed,
                                             label, T, t)
            st.run(sweeps)
            if decoder == "bp_osd":
                res = decoders.decode_bp_osd(rows_z, css.N, st.synd,
                                             iters=bp_iters, p=p, scale=scale)
            else:
                res = decoders.decode_bp_block_exact(css, st.synd, "X",
                                                     iters=bp_iters, p=p,
                                                     scale=scale)
            return decoders.verdict_css(css, st.error, res.correction, "X")

        rows.append(_sweep_temperature(label, T, trials, threads, run_trial))
    return rows


def crossing_temperature(rows, level: float):
    """First temperature where p_fail crosses `level`, by linear
    interpolation between adjacent sweep points; None if no bracket."""
    pts = sorted(rows, key=lambda r: r.temperature)
    for a, b in zip(pts, pts[1:]):
        pa, pb = a.p_fail, b.p_fail
        if (pa - level) * (pb - level) <= 0 and pa != pb:
            frac = (level - pa) / (pb - pa)
            return a.temperature + frac * (b.temperature - a.temperature)
    return None


@dataclass
class TreeScanResult:
    r2_values: list[int]
    n2_values: list[int]
    crossings: list[float]      # temperature of the p = 0.25 crossing
    betas: list[float]
    slope: float                # d beta_c / d log n2
    slope_stderr: float
    rows: list = field(default_factory=list)


def run_tree_scan(r1: int, r2_values, temperatures, trials: int, sweeps: int,
                  master_seed: int, threads: int = 1, bp_iters: int = 10,
                  p: float = 0.05, scale: float = 1.0) -> TreeScanResult:
    """Memory transition of tree products versus the size of one factor.

    The fixed r1 tree is placed as the second product factor, so the
    X-sector logical is supported on whole copies of it and its energy
    barrier stays fixed; growing the r2 tree then only multiplies the
    volume (nucleation entropy), pushing the transition to colder
    temperatures.  For each r2, locates the temperature where the
    X-sector failure probability crosses 0.25, then fits beta_c against
    log n2 by least squares.
    """
    fixed = hgp.tree_code(r1)
    n2s, crossings, betas, all_rows = [], [], [], []
    for r2 in r2_values:
        varying = hgp.tree_code(r2)
        css = hgp.hypergraph_product(
            varying.H, fixed.H,
            provenance={"construction": "tree_scan_product",
                        "r_vary": r2, "r_fixed": r1})
        n2 = varying.n
        rows = run_quantum_sweep(css, temperatures, trials, sweeps,
                                 master_seed, decoder="bp_block",
                                 bp_iters=bp_iters, p=p, scale=scale,
                                 threads=threads, label=f"tree_r2={r2}")
        Tc = crossing_temperature(rows, 0.25)
        if Tc is None:
            raise RuntimeError(f"no 0.25 crossing for r2 = {r2}; "
                               f"widen the temperature range")
        n2s.append(n2)
        crossings.append(Tc)
        betas.append(1.0 / Tc)
        all_rows.extend(rows)
    x = np.log(np.asarray(n2s, dtype=np.float64))
    y = np.asarray(betas)
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, res_ss, _, _ = np.linalg.lstsq(A, y, rcond=None)
    dof = len(x) - 2
    if dof > 0 and res_ss.size:
        s2 = float(res_ss[0]) / dof
    else:
        resid = y - A @ coef
        s2 = float(resid @ resid) / max(dof, 1)
    cov = s2 * np.linalg.inv(A.T @ A)
    return TreeScanResult(r2_values=list(r2_values), n2_values=n2s,
                          crossings=crossings, betas=list(map(float, y)),
                          slope=float(coef[0]),
                          slope_stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
                          rows=all_rows)


def write_rows_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "temperature", "trials", "failures",
                    "decode_failures", "p_fail", "std_err"])
        for r in rows:
            w.writerow([r.label, f"{r.temperature:.6g}", r.trials, r.failures,
                        r.decode_failures, f"{r.p_fail:.6g}",
                        f"{r.std_err:.6g}"])


def write_meta(outdir, config: dict, started: float) -> None:
    meta = {
        "config": config,
        "compiled_kernel": dynamics.USING_COMPILED,
        "elapsed_seconds": round(time.time() - started, 3),
    }
    with open(Path(outdir) / "meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def emit_plot(rows, path, title: str = "") -> None:
    """Failure probability versus temperature, one line per label.

    SVG output is byte deterministic (fixed hash salt, no timestamp).
    """
    import matplotlib
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "ldpclab"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    labels = []
    for r in rows:
        if r.label not in labels:
            labels.append(r.label)
    for lab in labels:
        pts = sorted((r for r in rows if r.label == lab),
                     key=lambda r: r.temperature)
        T = [r.temperature for r in pts]
        pf = [r.p_fail for r in pts]
        se = [r.std_err for r in pts]
        ax.errorbar(T, pf, yerr=se, marker="o", capsize=3, label=lab)
    ax.set_xlabel("temperature")
    ax.set_ylabel("failure probability")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------------------
# TOML configuration


_KINDS = ("classical", "quantum", "toric", "tree_scan")


def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    validate_config(cfg)
    return cfg


def _require(cfg: dict, section: str, key: str):
    try:
        return cfg[section][key]
    except KeyError as exc:
        raise ConfigError(f"missing [{section}] {key}") from exc


def validate_config(cfg: dict) -> None:
    kind = _require(cfg, "experiment", "kind")
    if kind not in _KINDS:
        raise ConfigError(f"experiment.kind must be one of {_KINDS}, got {kind!r}")
    sweep = cfg.get("sweep", {})
    temps = sweep.get("temperatures")
    if not temps or any(t <= 0 for t in temps):
        raise ConfigError("[sweep] temperatures must be a nonempty list of positives")
    if int(sweep.get("trials", 0)) < 1:
        raise ConfigError("[sweep] trials must be >= 1")
    if int(sweep.get("sweeps", 0)) < 1:
        raise ConfigError("[sweep] sweeps must be >= 1")
    if kind in ("classical", "quantum"):
        for key in ("n", "delta_b", "delta_c"):
            if int(_require(cfg, "code", key)) < 1:
                raise ConfigError(f"[code] {key} must be >= 1")
    if kind == "toric":
        Ls = _require(cfg, "code", "sizes")
        if any(L < 3 for L in Ls):
            raise ConfigError("[code] sizes must all be >= 3")
    if kind == "tree_scan":
        if int(_require(cfg, "code", "r1")) < 1:
            raise ConfigError("[code] r1 must be >= 1")
        if not _require(cfg, "code", "r2_values"):
            raise ConfigError("[code] r2_values must be nonempty")


def run_from_config(cfg: dict, master_seed: int, outdir, threads: int = 1) -> None:
    """Dispatch a validated config; writes results.csv, plot.svg, meta.json."""
    started = time.time()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    kind = cfg["experiment"]["kind"]
    sweep = cfg["sweep"]
    dec = cfg.get("decoder", {})
    dec_kw = {"bp_iters": int(dec.get("bp_iters", 10)),
              "p": float(dec.get("p", 0.05)),
              "scale": float(dec.get("scale", 1.0))}
    temps = sweep["temperatures"]
    trials = int(sweep["trials"])
    nsweeps = int(sweep["sweeps"])

    if kind == "classical":
        c = cfg["code"]
        code = sample_regular_code(int(c["n"]), int(c["delta_b"]),
                                   int(c["delta_c"]),
                                   int(c.get("code_seed", 0)))
        rows = run_classical_sweep(code, temps, trials, nsweeps, master_seed,
                                   threads=threads, **dec_kw)
    elif kind == "quantum":
        c = cfg["code"]
        base = sample_regular_code(int(c["n"]), int(c["delta_b"]),
                                   int(c["delta_c"]),
                                   int(c.get("code_seed", 0)))
        css = hgp.hypergraph_product(base.H, base.H)
        rows = run_quantum_sweep(css, temps, trials, nsweeps, master_seed,
                                 decoder=cfg.get("decoder", {}).get("name", "bp_osd"),
                                 threads=threads, **dec_kw)
    elif kind == "toric":
        rows = []
        for L in cfg["code"]["sizes"]:
            css = hgp.toric_code(int(L))
            rows.extend(run_quantum_sweep(css, temps, trials, nsweeps,
                                          master_seed, threads=threads,
                                          label=f"toric_L={L}", **dec_kw))
    else:
        c = cfg["code"]
        scan = run_tree_scan(int(c["r1"]), [int(r) for r in c["r2_values"]],
                             temps, trials, nsweeps, master_seed,
                             threads=threads, **dec_kw)
        rows = scan.rows
        with open(outdir / "scan.json", "w") as fh:
            json.dump({"r2_values": scan.r2_values, "n2_values": scan.n2_values,
                       "crossings": scan.crossings, "betas": scan.betas,
                       "slope": scan.slope, "slope_stderr": scan.slope_stderr},
                      fh, indent=2)
            fh.write("\n")

    write_rows_csv(rows, outdir / "results.csv")
    emit_plot(rows, outdir / "plot.svg", title=kind)
    write_meta(outdir, cfg, started)
