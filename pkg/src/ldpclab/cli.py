"""Command line interface."""

from __future__ import annotations

import functools
import sys

import click
import numpy as np

from . import codes, dynamics, harness, hgp, mfqec, thermo
from .errors import BudgetError, ConfigError


def _exit_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)
        except BudgetError as exc:
            click.echo(f"budget error: {exc}", err=True)
            sys.exit(3)
    return wrapper


@click.group()
def main():
    """Thermal memory experiments on LDPC check Hamiltonians."""


@main.command("sample-code")
@click.option("--n", type=int, required=True)
@click.option("--delta-b", type=int, required=True)
@click.option("--delta-c", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True,
              help="Basename for the .alist/.json pair.")
@_exit_codes
def sample_code(n, delta_b, delta_c, seed, out):
    """Sample a regular code and write it to disk."""
    try:
        code = codes.sample_regular_code(n, delta_b, delta_c, seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    codes.save_code(code, out)
    click.echo(f"n={code.n} m={code.m} k={code.k} redundancy={code.redundancy}")


@main.command("build-hgp")
@click.option("--base", type=click.Path(exists=True),
              help="Basename of a saved classical code (product with itself).")
@click.option("--toric-l", type=int, help="Build the L x L toric code instead.")
@click.option("--tree", type=(int, int), default=None,
              help="Build the product of two 3-ary tree codes (r1 r2).")
@click.option("--out", type=click.Path(), required=True)
@_exit_codes
def build_hgp(base, toric_l, tree, out):
    """Build a CSS product code and write it to disk."""
    picked = sum(x is not None for x in (base, toric_l, tree))
    if picked != 1:
        raise ConfigError("give exactly one of --base, --toric-l, --tree")
    if base is not None:
        c = codes.load_code(base)
        css = hgp.hypergraph_product(c.H, c.H)
    elif toric_l is not None:
        try:
            css = hgp.toric_code(toric_l)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        css = hgp.tree_hgp(*tree)
    hgp.save_css(css, out)
    click.echo(f"N={css.N} K={css.K} M_X={css.M_X} M_Z={css.M_Z}")


@main.command("thermo-verify")
@click.option("--matrix", type=click.Choice(["triangle", "cycle5", "torus3"]),
              default=None, help="Built-in check matrix.")
@click.option("--alist", type=click.Path(exists=True), default=None,
              help="Check matrix in alist format.")
@click.option("--beta-min", type=float, default=0.2, show_default=True)
@click.option("--beta-max", type=float, default=2.0, show_default=True)
@click.option("--points", type=int, default=10, show_default=True)
@_exit_codes
def thermo_verify(matrix, alist, beta_min, beta_max, points):
    """Check direct vs dual evaluation of log Z over a beta grid."""
    if (matrix is None) == (alist is None):
        raise ConfigError("give exactly one of --matrix, --alist")
    if matrix is not None:
        H = {"triangle": thermo.triangle_matrix,
             "cycle5": lambda: thermo.cycle_matrix(5),
             "torus3": thermo.torus_ising_matrix}[matrix]()
    else:
        from . import io_alist
        H = io_alist.read_alist(alist)
    if beta_min <= 0 or beta_max < beta_min or points < 1:
        raise ConfigError("need 0 < beta-min <= beta-max and points >= 1")
    worst = 0.0
    for beta in np.linspace(beta_min, beta_max, points):
        rep = thermo.verify_kw_duality(H, float(beta))
        worst = max(worst, rep.rel_err)
        click.echo(f"beta={rep.beta:6.3f} beta_dual={rep.beta_dual:7.4f} "
                   f"logZ={rep.log_Z:12.8f} dual={rep.log_Z_dual_form:12.8f} "
                   f"rel_err={rep.rel_err:.3e}")
    click.echo(f"worst rel_err = {worst:.3e}")


def _run_cmd(kind):
    @click.option("--config", "config_path", type=click.Path(), required=True)
    @click.option("--seed", type=int, default=0, show_default=True)
    @click.option("--out", type=click.Path(), required=True)
    @click.option("--threads", type=int, default=1, show_default=True)
    @_exit_codes
    def cmd(config_path, seed, out, threads):
        cfg = harness.load_config(config_path)
        if cfg["experiment"]["kind"] != kind:
            raise ConfigError(f"config kind {cfg['experiment']['kind']!r} "
                              f"does not match this command ({kind})")
        harness.run_from_config(cfg, seed, out, threads=threads)
        click.echo(f"results in {out}")
    return cmd


main.command("sweep-classical",
             help="Classical memory sweep from a TOML config.")(_run_cmd("classical"))
main.command("sweep-quantum",
             help="Quantum (X sector) memory sweep from a TOML config.")(_run_cmd("quantum"))
main.command("sweep-toric",
             help="Toric code memory sweep from a TOML config.")(_run_cmd("toric"))
main.command("tree-scan",
             help="Transition scan over tree product codes.")(_run_cmd("tree_scan"))


@main.command("sort-bench")
@click.option("--n-max", type=int, default=12, show_default=True)
@_exit_codes
def sort_bench(n_max):
    """Batcher network cost versus best known sorting networks."""
    click.echo(f"{'n':>3} {'size':>5} {'depth':>6} {'gates':>6}  best(depth,size)")
    for n in range(2, n_max + 1):
        net = mfqec.batcher_network(n)
        best = mfqec.OPTIMAL_SORT_COST.get(n)
        tail = f"{best}" if best else "-"
        click.echo(f"{n:>3} {net.size:>5} {net.depth:>6} {net.gate_count:>6}  {tail}")


@main.command("kernel-info")
def kernel_info():
    """Report which sweep kernel is active."""
    click.echo("compiled" if dynamics.USING_COMPILED else "pure python")


@main.command("plot")
@click.option("--csv", "csv_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--title", type=str, default="")
@_exit_codes
def plot(csv_path, out, title):
    """Replot a results.csv file."""
    import csv as _csv
    rows = []
    with open(csv_path) as fh:
        for rec in _csv.DictReader(fh):
            rows.append(harness.SweepRow(
                label=rec["label"], temperature=float(rec["temperature"]),
                trials=int(rec["trials"]), failures=int(rec["failures"]),
                decode_failures=int(rec["decode_failures"])))
    harness.emit_plot(rows, out, title=title)
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
