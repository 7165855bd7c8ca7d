"""Acceptance gate: one test per release criterion, one printed line each.

Run with `pytest -s tests/test_acceptance.py` to see the PASS/FAIL lines.
"""

import math
import time

import numpy as np

from ldpclab import codes, decoders, dynamics, f2, harness, hgp, mfqec, thermo


def _report(name: str, ok: bool, detail: str = ""):
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] {name}" + (f" :: {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_01_classical_partition_triviality():
    t0 = time.time()
    checked = 0
    worst = 0.0
    seed = 0
    while checked < 20:
        c = codes.sample_regular_code(16, 3, 4, seed=seed)
        seed += 1
        if c.redundancy != 0:
            continue
        for beta in (0.3, 1.0, 3.0):
            a = thermo.log_Z_classical_analytic(c, beta)
            b = thermo.log_Z_bruteforce(c.H, beta)
            worst = max(worst, abs(a - b) / abs(b))
        checked += 1
    elapsed = time.time() - t0
    _report("classical partition function triviality",
            worst < 1e-9 and elapsed < 60,
            f"20 codes, worst rel err {worst:.2e}, {elapsed:.1f}s")


def test_02_duality_identity():
    worst = 0.0
    for H in (thermo.triangle_matrix(), thermo.cycle_matrix(5),
              thermo.torus_ising_matrix()):
        for beta in np.linspace(0.2, 2.0, 10):
            worst = max(worst, thermo.verify_kw_duality(H, float(beta)).rel_err)
    _report("high/low temperature duality", worst < 1e-9,
            f"worst rel err {worst:.2e}")


def test_03_quantum_triviality():
    ok = True
    for seed in range(3):
        c = codes.sample_regular_code(12, 3, 4, seed=10 + seed)
        if c.redundancy != 0:
            continue
        css = hgp.hypergraph_product(c.H, c.H)
        ok &= css.K == c.k ** 2
        ok &= css.M_X == css.M_Z == c.n * (c.n - c.k)
    five = hgp.hypergraph_product(np.array([[1, 1]], dtype=np.uint8),
                                  np.array([[1, 1]], dtype=np.uint8))
    ok &= (five.N, five.K) == (5, 1)
    worst = 0.0
    for beta in (0.3, 1.0, 3.0):
        analytic = thermo.log_Z_css_analytic(five, beta)
        total = five.K * np.log(2.0)
        for rows, M in ((five.hx_rows, five.M_X), (five.hz_rows, five.M_Z)):
            counts, _ = thermo._colspace_weight_histogram(
                hgp.rows_to_dense(rows, five.N))
            total += thermo.log_Z_from_histogram(counts, M, beta)
        worst = max(worst, abs(total - analytic) / abs(analytic))
    _report("quantum partition function triviality", ok and worst < 1e-9,
            f"[[5,1,2]] coset enumeration rel err {worst:.2e}")


def test_04_rate_lemma_statistics():
    good34 = sum(codes.sample_regular_code(32, 3, 4, seed=s).k == 32 - 24
                 for s in range(100))
    good45 = sum(codes.sample_regular_code(40, 4, 5, seed=s).k == 40 - 32 + 1
                 for s in range(100))
    _report("rate lemma parity statistics", good34 >= 90 and good45 >= 90,
            f"(3,4): {good34}/100 with k=n-m, (4,5): {good45}/100 with k=n-m+1")


def _interp_T(rows, level):
    return harness.crossing_temperature(rows, level)


def test_05_classical_dynamical_transition():
    t0 = time.time()
    temps = [0.8, 1.0, 1.1, 1.2, 1.3, 1.4, 1.6]
    by_n = {}
    for n in (100, 500, 1000):
        code = codes.sample_regular_code(n, 4, 5, seed=n)
        by_n[n] = harness.run_classical_sweep(code, temps, trials=200,
                                              sweeps=100, master_seed=2024,
                                              label=f"n={n}")
    elapsed = time.time() - t0
    p_cold = [by_n[n][0].p_fail for n in (100, 500, 1000)]
    ok = p_cold[0] >= p_cold[1] >= p_cold[2] and p_cold[2] < 0.05
    p_hot = [by_n[n][-1].p_fail for n in (100, 500, 1000)]
    ok &= all(p > 0.95 for p in p_hot)
    crossings = {n: _interp_T(by_n[n], 0.5) for n in by_n}
    ok &= all(c is not None and 1.0 <= c <= 1.4 for c in crossings.values())
    # Curves cross: the midpoint moves to higher T with n, and the
    # transition is sharper at the largest size than the smallest.
    ok &= crossings[100] < crossings[500] < crossings[1000]
    widths = {}
    for n, rows in by_n.items():
        lo, hi = _interp_T(rows, 0.1), _interp_T(rows, 0.9)
        widths[n] = (hi - lo) if lo is not None and hi is not None else np.inf
    ok &= widths[1000] < widths[100]
    ok &= elapsed < 15 * 60
    _report("classical dynamical transition",
            bool(ok),
            f"p(0.8)={p_cold}, p(1.6)={p_hot}, "
            f"T50={ {n: round(c, 3) for n, c in crossings.items()} }, "
            f"widths={ {n: round(w, 3) for n, w in widths.items()} }, "
            f"{elapsed:.0f}s")


def test_06_quantum_dynamical_transition():
    t0 = time.time()
    base = codes.sample_regular_code(24, 7, 8, seed=5)
    css = hgp.hypergraph_product(base.H, base.H)
    assert css.N == 1017
    temps = [0.7, 0.9, 1.0, 1.1, 1.2, 1.3, 1.5]
    rows = harness.run_quantum_sweep(css, temps, trials=100, sweeps=100,
                                     master_seed=77)
    elapsed = time.time() - t0
    p = {r.temperature: r.p_fail for r in rows}
    cross = _interp_T(rows, 0.5)
    ok = (p[0.7] < 0.1 and p[1.5] > 0.9 and cross is not None
          and 0.8 <= cross <= 1.4 and elapsed < 30 * 60)
    _report("quantum dynamical transition", bool(ok),
            f"p(0.7)={p[0.7]:.2f}, p(1.5)={p[1.5]:.2f}, "
            f"T50={cross:.3f}, {elapsed:.0f}s")


def test_07_toric_size_independence():
    t0 = time.time()
    temps = [0.7, 1.0, 1.3]
    by_L = {}
    for L in (4, 6, 8):
        by_L[L] = harness.run_quantum_sweep(hgp.toric_code(L), temps,
                                            trials=300, sweeps=100,
                                            master_seed=99, label=f"L={L}")
    elapsed = time.time() - t0
    ok = elapsed < 10 * 60
    worst = 0.0
    for i in range(len(temps)):
        for La, Lb in ((4, 6), (4, 8), (6, 8)):
            a, b = by_L[La][i], by_L[Lb][i]
            gap = abs(a.p_fail - b.p_fail)
            band = 3.0 * math.sqrt(a.std_err ** 2 + b.std_err ** 2)
            worst = max(worst, gap / band)
            ok &= gap <= band
    _report("toric size independence", bool(ok),
            f"worst gap/band {worst:.2f}, {elapsed:.0f}s")


def test_08_detailed_balance():
    worst = 0.0
    for seed, (n, db, dc) in enumerate([(16, 3, 4), (15, 3, 5), (10, 2, 5)]):
        H = codes.sample_regular_code(n, db, dc, seed=seed).H
        for beta in (0.5, 1.3, 4.0):
            worst = max(worst,
                        dynamics.detailed_balance_max_residual(H, beta, 1200, seed))
    _report("detailed balance identity", worst <= 1e-12,
            f"max relative violation {worst:.2e} over 10800 pairs")


def test_09_stationarity():
    H = codes.sample_regular_code(6, 2, 3, seed=1).H
    tv = dynamics.stationarity_tv(H, 0.5, 10 ** 6, 7)
    _report("tiny scale stationarity", tv <= 0.02,
            f"total variation {tv:.4f} after 1e6 steps")


def test_10_sorting_networks():
    net = mfqec.batcher_network(8)
    ok = net.size == 19 and net.depth == 6 and net.gate_count == 152
    ok &= all(mfqec.verify_sorting(mfqec.batcher_network(n))
              for n in range(2, 13))
    _report("sorting network costs", bool(ok),
            f"batcher(8): {net.size} comparators, depth {net.depth}, "
            f"{net.gate_count} gates; zero-one verified n in [2,12]")


def test_11_metropolis_angles():
    worst = 0.0
    for beta in (0.1, 0.5, 1.0, 2.0, 5.0):
        for dc in range(3, 16):
            sched = mfqec.metropolis_angles(beta, dc)
            for j in range(1, dc + 1):
                target = math.exp(2.0 * beta * min(0, dc - 2 * j))
                worst = max(worst, abs(math.sin(sched.S[j]) ** 2 - target))
            for v in range(dc + 1):
                worst = max(worst, abs(sched.flip_probability(v)
                                       - mfqec.metropolis_acceptance(beta, dc, v)))
    _report("rotation angle schedule", worst <= 1e-12,
            f"worst invariant gap {worst:.2e}")


def test_12_tree_experiments():
    t0 = time.time()
    medians = []
    for r in (2, 3, 4):
        tree = hgp.tree_code(r)
        times = []
        for trial in range(11):
            ht = dynamics.logical_hitting_time(tree, 2.0, 11, trial,
                                               4_000_000, check_every=20)
            times.append(ht if ht is not None else float("inf"))
        medians.append(sorted(times)[5])
    ok = medians[0] < medians[1] < medians[2]
    temps = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1]
    scan = harness.run_tree_scan(3, [2, 3, 4, 5], temps, trials=60,
                                 sweeps=100, master_seed=123)
    elapsed = time.time() - t0
    ok &= scan.slope > 0 and elapsed < 30 * 60
    ci = 1.96 * scan.slope_stderr
    _report("tree hitting times and transition scan", bool(ok),
            f"medians {medians}, slope {scan.slope:.3f} "
            f"(95% CI +/- {ci:.3f}), betas {[round(b, 3) for b in scan.betas]}, "
            f"{elapsed:.0f}s")


def test_13_decoder_oracles():
    gen = np.random.default_rng(0)
    # Min-sum is exact block-ML on cycle-free graphs: whenever the
    # minimum-weight coset element is unique, BP must return it.
    tree_ok = tree_tot = 0
    for _ in range(60):
        n = 10
        H = np.zeros((n - 1, n), dtype=np.uint8)
        for child in range(1, n):
            H[child - 1, child] = 1
            H[child - 1, gen.integers(child)] = 1
        e = (gen.random(n) < 0.15).astype(np.uint8)
        s = f2.matvec(H, e)
        weights = []
        for idx in range(1 << n):
            v = np.array([(idx >> b) & 1 for b in range(n)], dtype=np.uint8)
            if np.array_equal(f2.matvec(H, v), s):
                weights.append(int(v.sum()))
        best = min(weights)
        if weights.count(best) != 1:
            continue
        tree_tot += 1
        bp = decoders.MinSumBP([np.nonzero(r)[0] for r in H], n, p=0.15)
        res = bp.decode(s, iters=20)
        if res.converged and int(res.correction.sum()) == best:
            tree_ok += 1
    ok = tree_ok == tree_tot

    # OSD-0 finds the minimum-weight coset element on single errors.
    osd_ok = osd_tot = 0
    for seed in range(10):
        c = codes.sample_regular_code(12, 3, 4, seed=100 + seed)
        rows = [np.nonzero(r)[0] for r in c.H]
        allv = ((np.arange(1 << c.n)[:, None] >> np.arange(c.n)) & 1).astype(np.uint8)
        syn = (allv @ c.H.T.astype(np.uint32)) & 1
        wts = allv.sum(axis=1)
        for j in range(c.n):
            e = np.zeros(c.n, dtype=np.uint8)
            e[j] = 1
            s = f2.matvec(c.H, e)
            res = decoders.decode_bp_osd(rows, c.n, s)
            osd_tot += 1
            if int(res.correction.sum()) == int(wts[(syn == s).all(axis=1)].min()):
                osd_ok += 1
    ok &= osd_ok / osd_tot >= 0.95

    # Syndrome contract under fuzzing: every converged decode satisfies
    # the syndrome bit-exactly.
    contract = True
    for seed in range(5):
        c = codes.sample_regular_code(25, 4, 5, seed=seed)
        rows = [np.nonzero(r)[0] for r in c.H]
        for _ in range(40):
            e = (gen.random(c.n) < gen.uniform(0.02, 0.4)).astype(np.uint8)
            s = f2.matvec(c.H, e)
            res = decoders.decode_bp_osd(rows, c.n, s)
            if res.converged:
                contract &= bool(np.array_equal(f2.matvec(c.H, res.correction), s))
    ok &= contract
    _report("decoder oracles", bool(ok),
            f"tree BP exact {tree_ok}/{tree_tot}, "
            f"OSD coset-minimal {osd_ok}/{osd_tot}, "
            f"syndrome contract {'held' if contract else 'violated'}")
