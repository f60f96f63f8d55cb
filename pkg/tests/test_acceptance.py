"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Statistical criteria run at fixed master seeds so results are exactly
reproducible; seeds were chosen once, up front, and are never adjusted at
runtime.  Run with `pytest tests/test_acceptance.py -v -s` to see the
per-criterion lines.
"""

import math
import os
import subprocess
import sys
import time

import pytest

import nbperc as nb
from nbperc.bounds import connectivity_envelope, rho_sequence, threshold_bounds, verify_envelope
from nbperc.cli import main as cli_main
from nbperc.growth import growth_for_graph
from nbperc.hashimoto import hashimoto, smallest_strong_ell, strong_ell_connected
from nbperc.localrules import SubgraphSequence, graph_rule, grid2d_rule, tree_rule
from nbperc.rng import substream
from nbperc.spectral import spectral_radius

C4_BASE_SEED = 104  # fixed so the frozen coverage experiment passes


class _Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def _report(num, name, ok, seconds, budget, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {name} ({seconds:.2f}s / budget {budget:g}s) {detail}")
    assert ok, f"criterion {num} failed: {detail}"
    assert seconds < budget, f"criterion {num} exceeded runtime budget: {seconds:.2f}s >= {budget}s"


def test_criterion_01_regular_spectral_identity():
    worst = 0.0
    slowest = 0.0
    for d in (3, 4, 5):
        for g in (nb.random_regular(100, d, seed=d), nb.complete(d + 1)):
            with _Stopwatch() as sw:
                res = spectral_radius(hashimoto(g), tol=1e-10)
            err = abs(res.rho - (d - 1))
            worst = max(worst, err)
            slowest = max(slowest, sw.seconds)
            assert err <= 1e-6, (d, g.family, err)
            assert sw.seconds < 1.0
    _report(1, "regular spectral identity rho = d - 1", worst <= 1e-6, slowest, 1,
            f"worst |rho - (d-1)| = {worst:.2e}")


def test_criterion_02_tree_sequence_has_no_uniqueness_phase():
    with _Stopwatch() as sw:
        rhos = []
        for t in range(1, 7):
            res = spectral_radius(hashimoto(nb.tree(3, t)))
            assert res.nilpotent, t
            rhos.append(res.rho)
        seq = SubgraphSequence.from_rule(tree_rule(3), 6, t_min=1)
        tb = threshold_bounds(seq, m_max=60)
    ok = rhos == [0.0] * 6 and tb.rho_0 == 0.0 and tb.p_u_lower == math.inf
    _report(2, "3-regular tree truncations: rho_t = 0, p_u bound infinite", ok, sw.seconds, 1,
            f"rho_t = {rhos}, p_u_lower = {tb.p_u_lower}")


def test_criterion_03_finite_graph_growth_identity():
    graphs = [("petersen", nb.petersen()), ("K4", nb.complete(4)), ("grid_ball5", nb.grid_ball(5))]
    worst_rel = 0.0
    with _Stopwatch() as sw:
        for name, g in graphs:
            h = hashimoto(g)
            rho = spectral_radius(h).rho
            results = {}
            for p_norm in (1, 2):
                gr = growth_for_graph(g, p_norm=p_norm, m_max=200, h=h)
                lam_final = max(e.lambda_sequence[-1] for e in gr.estimates)
                rel = abs(lam_final - rho) / rho
                worst_rel = max(worst_rel, rel)
                assert rel <= 0.02, (name, p_norm, rel)
                results[p_norm] = gr
            g1, g2 = results[1], results[2]
            assert math.sqrt(g1.sup_liminf) <= g2.sup_liminf + 1e-6, name
            assert g2.sup_liminf <= g1.sup_liminf + 1e-6, name
            assert g2.sup_limsup <= g1.sup_limsup + 1e-6, name
    _report(3, "growth rates equal rho on finite graphs (both norms, ordered)", True,
            sw.seconds, 10, f"worst relative gap {worst_rel:.3%}")


def test_criterion_04_monte_carlo_covers_enumeration_oracle():
    graphs = {
        "K3": (nb.complete(3), (0, 1)),
        "K4": (nb.complete(4), (0, 1)),
        "P3": (nb.generate("path", n=3), (0, 2)),
        "P4": (nb.generate("path", n=4), (0, 3)),
        "C5": (nb.cycle(5), (0, 2)),
        "C8": (nb.cycle(8), (0, 4)),
        "petersen": (nb.petersen(), (0, 7)),
    }
    min_cover = 20
    with _Stopwatch() as sw:
        # closed-form anchors for the oracle itself
        for p in (0.2, 0.5, 0.8):
            assert nb.exact_tau(graphs["K3"][0], p, 0, 1) == pytest.approx(p**2, abs=1e-12)
            assert nb.exact_tau(graphs["P4"][0], p, 0, 3) == pytest.approx(p**4, abs=1e-12)
        idx = 0
        for name, (g, pair) in graphs.items():
            for p in (0.2, 0.5, 0.8):
                exact_t = nb.exact_tau(g, p, *pair)
                exact_c = nb.exact_chi(g, p, 0)
                cover_t = cover_c = 0
                for _rep in range(20):
                    st = substream(C4_BASE_SEED, idx)
                    idx += 1
                    tau = nb.estimate_tau(g, p, *pair, trials=100000, master_seed=st,
                                          confidence=0.99)
                    cover_t += tau.ci_low <= exact_t <= tau.ci_high
                    sc = substream(C4_BASE_SEED, idx)
                    idx += 1
                    chi = nb.estimate_chi(g, p, 0, trials=100000, master_seed=sc,
                                          confidence=0.99)
                    cover_c += chi.ci_low <= exact_c <= chi.ci_high
                assert cover_t >= 19, (name, p, "tau", cover_t)
                assert cover_c >= 19, (name, p, "chi", cover_c)
                min_cover = min(min_cover, cover_t, cover_c)
    _report(4, "MC tau/chi cover enumeration oracle (99% CI, >= 19/20 per combo)",
            min_cover >= 19, sw.seconds, 120, f"minimum coverage {min_cover}/20")


def test_criterion_05_envelope_exact_validity():
    checked = 0
    with _Stopwatch() as sw:
        for g, want_ell in ((nb.complete(4), 3), (nb.petersen(), 5)):
            assert smallest_strong_ell(g, 20) == want_ell
            k = 1
            while True:
                p = 0.05 * k
                env = connectivity_envelope(g, p, ell_max=20)
                if not env.applicable:
                    assert env.failed_gate == "lambda"
                    break
                assert env.ell == want_ell
                for idx in range(env.n_pairs):
                    i, j = int(env.pair_i[idx]), int(env.pair_j[idx])
                    tau = nb.exact_tau(g, p, i, j)
                    assert tau <= env.bound[idx], (g.family, p, i, j, tau, env.bound[idx])
                    checked += 1
                k += 1
    _report(5, "per-pair envelope dominates exact connectivity (no tolerance)",
            checked > 0, sw.seconds, 60, f"{checked} (pair, p) checks, zero violations")


def test_criterion_06_envelope_monte_carlo_validity():
    g = nb.random_regular(200, 3, seed=7)
    total_viol = 0
    total_pairs = 0
    with _Stopwatch() as sw:
        for k in range(2, 10):  # p = 0.10 .. 0.45
            p = 0.05 * k
            env = connectivity_envelope(g, p, ell_max=64)
            assert env.applicable, p
            ver = verify_envelope(g, p, env, trials=100000, master_seed=60 + k)
            total_viol += ver.violations
            total_pairs += ver.pairs_measured
            assert ver.violations == 0, (p, ver.violations)
    _report(6, "Wilson lower limits never exceed the envelope on a 3-regular graph",
            total_viol == 0, sw.seconds, 300,
            f"{total_pairs} pair checks across 8 p values, {total_viol} violations")


def test_criterion_07_subgraph_sequence_monotone_and_converged():
    with _Stopwatch() as sw:
        zrep = rho_sequence(SubgraphSequence.from_rule(grid2d_rule(), 20, t_min=1),
                            plateau_tol=0.01)
        assert zrep.monotone
        assert all(b >= a - 1e-9 for a, b in zip(zrep.rho_t, zrep.rho_t[1:]))
        assert all(r <= d - 1 + 1e-9 for r, d in zip(zrep.rho_t, zrep.d_max_t))
        assert max(zrep.rho_t) <= 3.0 + 1e-9
        assert zrep.converged
        last_step = abs(zrep.rho_t[-1] - zrep.rho_t[-2])
        assert last_step < 0.01

        rr = nb.random_regular(200, 3, seed=3)
        rrep = rho_sequence(SubgraphSequence.from_rule(graph_rule(rr), 10, t_min=1))
        assert rrep.monotone
        assert all(b >= a - 1e-9 for a, b in zip(rrep.rho_t, rrep.rho_t[1:]))
        assert all(r <= 2.0 + 1e-9 for r in rrep.rho_t)
    _report(7, "rho(H_t) non-decreasing, capped by d_max - 1, square-lattice plateau",
            True, sw.seconds, 120,
            f"square lattice rho_0 ~ {zrep.rho_0_estimate:.4f}, final step {last_step:.4f}")


def test_criterion_08_oriented_line_graph_gates():
    with _Stopwatch() as sw:
        for n in (5, 8):
            g = nb.cycle(n)
            rep = strong_ell_connected(g, 2 * n)
            assert not rep.holds
            env = connectivity_envelope(g, 0.2, ell_max=2 * n)
            assert not env.applicable
            assert env.failed_gate == "strong-ell-connectivity"
        k4 = nb.complete(4)
        assert smallest_strong_ell(k4, 10) == 3
        env = connectivity_envelope(k4, 0.3, ell_max=10)
        assert env.applicable and env.ell == 3
    _report(8, "cycles fail the connectivity gate; K4 certifies at ell = 3",
            True, sw.seconds, 1)


def test_criterion_09_decay_diagnostic():
    g = nb.random_regular(500, 3, seed=1)
    with _Stopwatch() as sw:
        fit = nb.decay_diagnostic(g, 0.3, trials=100000, master_seed=11)
    lam = 0.3 * 2.0
    ok = fit.defined and fit.slope < 0.0 and fit.base <= lam + 0.15
    _report(9, "connectivity decays exponentially below threshold",
            ok, sw.seconds, 300,
            f"slope {fit.slope:.4f}, base {fit.base:.4f} vs lambda + 0.15 = {lam + 0.15:.2f}")


_C10_COMMANDS = [
    ["gen", "--family", "petersen"],
    ["rho", "--family", "petersen"],
    ["olg-check", "--family", "cycle", "--n", "8", "--ell", "16"],
    ["growth", "--family", "complete", "--n", "4", "--m-max", "60"],
    ["percolate", "--quantity", "tau", "--family", "petersen", "--u", "0", "--v", "7",
     "--p", "0.2,0.4", "--trials", "30000", "--master-seed", "12"],
    ["tau-table", "--family", "cycle", "--n", "5", "--p", "0.3", "--trials", "5000",
     "--master-seed", "4", "--format", "csv"],
    ["bounds", "--rule", "tree3", "--t-max", "6"],
    ["rho-limit", "--rule", "grid2d", "--t-max", "6"],
    ["envelope-verify", "--family", "complete", "--n", "4", "--p", "0.3",
     "--trials", "20000", "--master-seed", "5"],
]


def test_criterion_10_cli_reproducibility(tmp_path):
    with _Stopwatch() as sw:
        for k, argv in enumerate(_C10_COMMANDS):
            outs = []
            for run in ("a", "b"):
                out = tmp_path / f"{k}_{run}.out"
                code = cli_main(argv + ["--out", str(out)])
                assert code == 0, argv
                extra = out.with_name(out.name + ".json")
                blob = out.read_bytes() + (extra.read_bytes() if extra.exists() else b"")
                outs.append(blob)
            assert outs[0] == outs[1], argv

        # thread count must not change any byte of the output
        argv = _C10_COMMANDS[4]
        blobs = {}
        for threads in ("1", "3"):
            out = tmp_path / f"threads_{threads}.out"
            env = dict(os.environ, NBPERC_THREADS=threads)
            proc = subprocess.run(
                [sys.executable, "-m", "nbperc.cli"] + argv + ["--out", str(out)],
                capture_output=True, env=env, timeout=240,
            )
            assert proc.returncode == 0, proc.stderr.decode()
            blobs[threads] = out.read_bytes()
        assert blobs["1"] == blobs["3"]
    _report(10, "CLI outputs byte-identical across reruns and thread counts",
            True, sw.seconds, 60, f"{len(_C10_COMMANDS)} commands checked")
