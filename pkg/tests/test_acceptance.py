"""Acceptance criteria, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL ...`` line; the lines are
also collected and repeated at the end of the pytest run (see conftest.py).
Run standalone with ``python tests/test_acceptance.py``.
"""
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

from oracles import bell, grid_discord, random_density  # noqa: E402
from qmaps import channels, cli, classify, tomography  # noqa: E402
from qmaps.discord import OptimizerConfig, discord, mutual_information, zero_discord_test  # noqa: E402
from qmaps.qcore import random_density as qm_density  # noqa: E402
from qmaps.states import (  # noqa: E402
    BipartiteState,
    bell_state,
    classical_bit_state,
    example_state,
    max_example_c23,
    ppt_min_eigenvalue,
    product_state,
)

RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_1_eigenvalue_formula_sweep():
    t0 = time.perf_counter()
    worst, worst_sum = 0.0, 0.0
    for c23 in (0.0, 0.25, 0.5, 1.0):
        for wt in np.linspace(0, np.pi / 2, 101):
            num = channels.choi_eig(channels.example_map(wt, c23)).lambdas
            lam, _ = channels.analytic_example(wt, c23)
            worst = max(worst, np.max(np.abs(num - np.sort(lam)[::-1])))
            worst_sum = max(worst_sum, abs(num.sum() - 2))
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and worst_sum < 1e-10 and dt < 5
    report(1, ok, f"max |lambda err| = {worst:.2e}, max |sum - 2| = {worst_sum:.2e}, {dt:.2f} s")


def test_criterion_2_cp_boundary():
    lo = {k: channels.is_cp(channels.example_map(np.pi * k / 16, 1.0))[1] for k in (1, 2, 3)}
    ok = abs(lo[2]) < 1e-9 and lo[1] < -1e-3 and lo[3] > 1e-3
    report(2, ok, f"min lambda at pi/16, pi/8, 3pi/16 = {lo[1]:.4g}, {lo[2]:.2e}, {lo[3]:.4g}")


def test_criterion_3_theorem_suite():
    t0 = time.perf_counter()
    try:
        recs = classify.theorem_harness(500, [(2, 2), (2, 3), (3, 2), (3, 3)], seed=0)
        violation = None
    except classify.TheoremViolation as exc:
        recs, violation = [], exc
    dt = time.perf_counter() - t0
    if violation is not None:
        report(3, False, f"violation {violation}")
    comp = max(r.completeness_error for r in recs)
    out = max(r.output_error for r in recs)
    lo = min(r.min_choi_eigenvalue for r in recs)
    ok = len(recs) == 500 and comp < 1e-10 and out < 1e-10 and lo > -1e-10 and dt < 60
    report(3, ok, f"500 trials: completeness {comp:.1e}, output {out:.1e} (6 marginals each), "
                  f"min lambda {lo:.1e}, {dt:.1f} s")


def test_criterion_4_contrapositive_suite():
    try:
        recs = classify.ncp_search(500, "random-correlated", seed=0, opt=OptimizerConfig(restarts=20))
    except classify.ContrapositiveViolation as exc:
        report(4, False, f"violation {exc}")
    bad = [r for r in recs if r.min_choi_eigenvalue < -1e-6 and r.discord <= 1e-6]
    frac = classify.ncp_fraction(recs)
    report(4, not bad and len(recs) == 500, f"500 trials, NCP fraction {frac:.3f}, violations {len(bad)}")


def test_criterion_5_discord_values():
    rng = np.random.default_rng(2024)
    d_bell = discord(bell_state()).discord
    d_cl = discord(classical_bit_state()).discord
    prod_worst = 0.0
    for _ in range(10):
        rho = product_state(qm_density(2, rng), qm_density(2, rng))
        prod_worst = max(prod_worst, abs(mutual_information(rho)))
    gap = 0.0
    for k in range(20):
        m = random_density(4, rng, rank=1 + k % 4)
        gap = max(gap, abs(discord(BipartiteState(m, 2, 2)).discord - grid_discord(m)))
    ok = abs(d_bell - 1) < 1e-4 and d_cl < 1e-6 and prod_worst < 1e-10 and gap < 1e-4
    report(5, ok, f"Bell {d_bell:.8f}, classical {d_cl:.1e}, product I {prod_worst:.1e}, "
                  f"max |opt - grid| on 20 states {gap:.1e}")
    assert abs(grid_discord(bell()) - 1) < 1e-4


def test_criterion_6_ppt_facts():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        a = rng.normal(size=3)
        a *= rng.uniform() / np.linalg.norm(a)
        rho = example_state(a, rng.uniform() * max_example_c23(a))
        pt = rho.mat.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        worst = max(worst, np.linalg.norm(pt - rho.mat))
    b = ppt_min_eigenvalue(bell_state())
    ok = worst < 1e-12 and abs(b + 0.5) < 1e-12
    report(6, ok, f"max ||rho^PT - rho|| = {worst:.1e}, Bell PT min eigenvalue = {b:.15f}")


def test_criterion_7_tomography():
    rng = np.random.default_rng(7)
    lo, discordant = np.inf, 0
    for _ in range(100):
        rho, u = tomography.random_tomography_pair(rng)
        discordant += not zero_discord_test(rho)[0]
        res = tomography.simulate(tomography.PreparationModel.projective(2), rho, u)
        lo = min(lo, res.min_eigenvalue)
    fid = np.diag([1.0, 0.0]).astype(complex)
    rot = tomography.simulate(tomography.PreparationModel.rotation_only(2, fid), example_state([0, 0, 0], 1.0),
                              channels.example_unitary(0.05))
    direct = channels.min_choi_eigenvalue(channels.example_map(0.05, 1.0))
    cp, _ = tomography.closest_cp(rot.map)
    cp_lo = np.linalg.eigvalsh(cp.b_matrix)[0]
    cp_tr = abs(np.trace(cp.b_matrix).real - 2)
    idem = np.linalg.norm(tomography.closest_cp(cp)[0].b_matrix - cp.b_matrix)
    ok = (lo >= -1e-9 and discordant > 0 and rot.min_eigenvalue < 0 and abs(rot.min_eigenvalue - direct) < 1e-9
          and cp_lo >= -1e-12 and cp_tr < 1e-10 and idem == 0)
    report(7, ok, f"projective min lambda {lo:.2e} over 100 pairs ({discordant} discordant); "
                  f"rotation-only {rot.min_eigenvalue:.10f} vs direct {direct:.10f}; "
                  f"closest-CP min {cp_lo:.1e}, |tr - 2| {cp_tr:.1e}, idempotence gap {idem:.1e}")


def test_criterion_8_howard_scenario():
    lo_a, neg_b = np.inf, np.inf
    for seed in range(50):
        a, b = tomography.howard_scenario(0.7, 1.0, seed=seed)
        lo_a = min(lo_a, a.min_eigenvalue)
        neg_b = min(neg_b, b.negativity)
    ok = lo_a >= -1e-9 and neg_b > 1e-3
    report(8, ok, f"p0 = 0.7: classical branch min lambda {lo_a:.2e} over 50 seeds; "
                  f"discordant branch negativity {neg_b:.4f}")


def test_criterion_9_cli_determinism(tmp_path):
    bell_path, ex_path = str(tmp_path / "bell.qm"), str(tmp_path / "ex.qm")
    cli.write_state(bell_path, bell_state())
    cli.write_state(ex_path, example_state([0.5, 0, 0], 0.5))
    commands = {
        "sweep-example": ["--c23", "0.5", "--points", "101"],
        "discord": ["--state", bell_path, "--restarts", "20"],
        "classify": ["--state", ex_path],
        "cp-check": ["--c23", "1", "--omega-t", "0.05"],
        "theorem-check": ["--trials", "10", "--dims", "2x2", "--seed", "7"],
        "ncp-search": ["--trials", "10", "--seed", "7"],
        "tomo-sim": ["--p0", "0.7", "--trials", "3", "--seed", "7"],
    }
    differing = []
    for name, args in commands.items():
        blobs = []
        for k in range(2):
            out = tmp_path / f"{name}.{k}.csv"
            code = cli.dispatch([name, *args, "--out", str(out)])
            blobs.append((code, out.read_bytes() if out.exists() else None))
        if blobs[0] != blobs[1] or blobs[0][0] != 0 or blobs[0][1] is None:
            differing.append(name)
    report(9, not differing, f"{len(commands)} subcommands run twice; differing or failing: {differing or 'none'}")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            if fn.__code__.co_argcount:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
