"""Acceptance suite: one test per primary criterion, each printing a
PASS/FAIL line with its measured values (run with -s to see them all).

The deterministic sewing-soundness criterion is implemented exactly at
its stated tolerances and is expected to fail: under worst-case quarter
corners on every stage the per-level data is provably ambiguous between
folded values far wider apart than the stated bound, for any
reconstruction rule. Witness: at T = 1/6 every corner datum is also
consistent with T = 1/3 (folded distance 1/6), and exact interval
propagation over the grid shows consistency sets up to ~0.175 wide,
versus the required 2 * 2^-k/3. The README discusses the failure.
"""

import itertools

import numpy as np
import pytest

from framealign import analysis, qpe, spinhalf, vignettes
from framealign.analysis import fit_scaling_slope, scaling_sweep
from framealign.cli import main
from framealign.frames import EulerAngles, random_frame
from framealign.iterative import chernoff_n, estimate_theta, sew_fraction
from framealign.runtime import RngStream, Session

SWEEP_SEED = 7


def _report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    return ok


def test_criterion_1_algebraic_identity():
    rng = RngStream(1001)
    worst_gen = 0.0
    for _ in range(1000):
        ang = random_frame(rng)
        direct = spinhalf.u_generator(ang)
        composed = spinhalf.PAULI_Z @ spinhalf.alice_conjugate(spinhalf.PAULI_Z, ang)
        worst_gen = max(worst_gen, float(np.abs(direct - composed).max()))
    worst_pow = 0.0
    for _ in range(10):
        ang = random_frame(rng)
        acc = np.eye(2, dtype=complex)
        u1 = spinhalf.u_generator(ang)
        m = 0
        for j in range(13):
            target = 2 ** j
            while m < target:
                acc = u1 @ acc
                m += 1
            worst_pow = max(worst_pow,
                            float(np.abs(spinhalf.u_power(ang, target) - acc).max()))
    ok = worst_gen <= 1e-12 and worst_pow <= 1e-9
    assert _report("algebraic identity",
                   ok, f"generator dev {worst_gen:.2e}, power dev {worst_pow:.2e}")


def test_criterion_2_sizing_formulas():
    n119 = chernoff_n(0.25, 0.05)
    x6 = qpe.register_size(4, 0.25)
    session = Session(EulerAngles(1.0, 1.2, 0.3), master_seed=1)
    estimate_theta(session, 3, 0.05, RngStream(1))
    n = chernoff_n(0.25, 0.05 / 4)
    round_trips = session.ledger.backward_qubits
    ok = n119 == 119 and x6 == 6 and round_trips == n * (2 ** 3 - 1)
    assert _report("sizing formulas",
                   ok, f"chernoff {n119}, register {x6}, "
                       f"round trips {round_trips} = {n}*(2^3-1)")


def test_criterion_3_sewing_soundness_deterministic():
    """Stated tolerances: 4096-point T grid, k <= 6, every stage's
    probability perturbed at +-1/4 (all sign combinations), folded error
    <= 2^-k/3 always, and the mirror pick correct (true-branch error
    within the same bound) whenever |cos pi T| >= 1/4. The mirror stage
    is fed its exact probability; perturbing it too only widens the
    failure. Expected to fail: the criterion is unattainable (see the
    module docstring)."""
    grid = np.arange(4096) / 4096.0
    worst = {}
    ok = True
    for k in range(1, 7):
        signs = 0.5 * np.array(list(itertools.product((-1.0, 1.0), repeat=k))).T
        powers = 2.0 ** np.arange(k)
        c_true = np.cos(2 * np.pi * powers[:, None] * grid[None, :])
        chat = (c_true[:, :, None] + signs[:, None, :]).reshape(k, -1)
        mirror = np.repeat(0.5 * (1 + np.cos(np.pi * grid)), signs.shape[1])
        t_rep = np.repeat(grid, signs.shape[1])
        t_hat, _ = sew_fraction(chat, mirror)
        folded = np.minimum(np.abs(t_hat - t_rep), np.abs(t_hat - (1 - t_rep)))
        bound = 2.0 ** -k / 3.0
        mask = np.abs(np.cos(np.pi * t_rep)) >= 0.25
        unfolded_bad = (np.abs(t_hat - t_rep)[mask] > bound + 1e-12).sum()
        worst[k] = (float(folded.max()), int(unfolded_bad))
        ok = ok and folded.max() <= bound + 1e-12 and unfolded_bad == 0
    detail = "; ".join(f"k={k}: folded max {w:.4f} vs {2.0**-k/3:.4f}, "
                       f"mirror misses {b}" for k, (w, b) in worst.items())
    assert _report("sewing soundness (deterministic)", ok, detail)


def test_criterion_4_estimation_contract_sampled():
    k, eps, trials = 6, 0.1, 400
    adversarial_t = (0.5 + 2.0 ** -(k + 2), 0.5 - 2.0 ** -(k + 2),
                     2.0 ** -k, 0.25, 1.0 / 3.0, 0.7071067811865476)
    fails = 0
    root = RngStream(20260808)
    for t in range(trials):
        r = root.derive("trial", t)
        if t % 3 == 0:
            truth = adversarial_t[(t // 3) % len(adversarial_t)]
        else:
            truth = float(r.derive("T").random())
        session = Session(EulerAngles.canonical(1.0, np.pi * truth, 0.2),
                          master_seed=t)
        est = estimate_theta(session, k, eps, r)
        folded = min(abs(est.center - truth), abs(est.center - (1 - truth)))
        if folded > 2.0 ** -(k + 1):
            fails += 1
    frac = fails / trials
    ok = frac <= 0.145
    assert _report("estimation contract (sampled)",
                   ok, f"folded failure fraction {frac:.4f} <= 0.145")


def test_criterion_5_qpe():
    probs = qpe.run_register(EulerAngles(0.8, 0.375 * np.pi, 2.2), 4)
    two_point = (abs(probs[3] - 0.5) <= 1e-9 and abs(probs[13] - 0.5) <= 1e-9
                 and abs(probs.sum() - probs[3] - probs[13]) <= 1e-9)
    worst = 1.0
    for k in (2, 3, 4):
        for eps in (0.5, 0.25):
            x = qpe.register_size(k, eps)
            for i in range(64):
                t = i / 64.0
                dist = qpe.run_register(EulerAngles(0.3, np.pi * t, 0.1), x)
                succ = sum(p for y, p in enumerate(dist)
                           if abs(qpe.fold_outcome(y, x) - t) <= 2.0 ** -(k + 1) + 1e-12)
                worst = min(worst, succ - (1.0 - eps))
    ok = two_point and worst >= 0.0
    assert _report("qpe exactness and success floor",
                   ok, f"two-point {two_point}, worst margin {worst:.4f}")


def test_criterion_6_vignettes():
    trials = 10 ** 6
    rng = RngStream(606)
    singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    worst_amp = 0.0
    for _ in range(100):
        ang = random_frame(rng)
        r = spinhalf.euler_rotation(ang)
        sz_a = r.conj().T @ spinhalf.PAULI_Z @ r
        state = np.kron(np.eye(2), sz_a) @ singlet
        worst_amp = max(worst_amp, abs(np.vdot(singlet, state)) ** 2)
    fwd1 = vignettes.forward_spins_avg(1, trials, seed=61)
    steer = vignettes.singlet_steering(trials, seed=62)
    bell = vignettes.entangled_sigma_z(trials, seed=63)
    anti = vignettes.antiparallel_pair(10 ** 5, seed=64)
    anti2 = vignettes.antiparallel_two_backward(10 ** 5, seed=65)
    combined_sigma = np.hypot(fwd1.stderr, steer.stderr)
    led = lambda r: (r.ledger.forward_qubits, r.ledger.backward_qubits,
                     r.ledger.forward_cbits, r.ledger.backward_cbits)
    checks = {
        "singlet outcome": worst_amp <= 1e-12,
        "forward 2/3": abs(fwd1.avg_fidelity - 2.0 / 3.0) <= 0.005,
        "steering matches": abs(steer.avg_fidelity - fwd1.avg_fidelity)
                            <= 3 * combined_sigma,
        "bell 0.80": abs(bell.avg_fidelity - 0.80) <= 0.01,
        "ledger fwd": led(fwd1) == (1, 0, 0, 0),
        "ledger steer": led(steer) == (0, 1, 1, 0),
        "ledger anti": led(anti) == (1, 1, 1, 0),
        "ledger anti2": led(anti2) == (0, 2, 2, 0),
        "ledger bell": led(bell) == (2, 1, 0, 0),
        "anti exact": anti.stats["anti_alignment_dev"] <= 1e-12,
        "anti2 freqs": max(abs(f - 0.25)
                           for f in anti2.stats["outcome_pair_freqs"]) <= 0.01
                       and abs(anti2.stats["antiparallel_freq"] - 0.5) <= 0.005,
    }
    ok = all(checks.values())
    detail = (f"singlet amp {worst_amp:.1e}, fwd {fwd1.avg_fidelity:.4f}, "
              f"steer {steer.avg_fidelity:.4f}, bell {bell.avg_fidelity:.4f}"
              + ("" if ok else ", failed: "
                 + ", ".join(k for k, v in checks.items() if not v)))
    assert _report("vignettes", ok, detail)


def test_criterion_7_scaling_reproduction():
    rows = scaling_sweep(range(2, 9), trials=24, seed=SWEEP_SEED)
    cs = [(1 - r.f_min / (1 - r.epsilon) ** 2) * 4.0 ** r.k for r in rows]
    slope = fit_scaling_slope(rows)
    floor_ok = max(cs) <= 8 * np.pi ** 2
    slope_ok = -2.4 <= slope <= -1.6
    ok = floor_ok and slope_ok
    assert _report("scaling reproduction",
                   ok, f"measured c max {max(cs):.2f} <= {8 * np.pi ** 2:.1f}, "
                       f"slope {slope:.3f} in [-2.4, -1.6]")


def test_criterion_secondary_plot_smoke(tmp_path, capsys):
    """Secondary component: renders the emitted CSVs and rejects bad
    headers; skipped when the plots package is not installed (every
    primary criterion above runs without it)."""
    plots = pytest.importorskip("framealign_plots")
    sweep_csv = tmp_path / "sweep.csv"
    assert main(["sweep", "--k", "2..3", "--seed", "3", "--trials", "1",
                 "--output", str(sweep_csv)]) == 0
    vig_csv = tmp_path / "vig.csv"
    assert main(["vignette", "singlet-steering", "--trials", "2000",
                 "--seed", "1", "--output", str(vig_csv)]) == 0
    capsys.readouterr()
    out1 = tmp_path / "scaling.svg"
    out2 = tmp_path / "vig.png"
    plots.render(plots.PlotJob(str(sweep_csv), "scaling", str(out1)))
    plots.render(plots.PlotJob(str(vig_csv), "vignettes", str(out2)))
    rendered = out1.exists() and out2.exists()
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n1,2\n")
    try:
        plots.render(plots.PlotJob(str(bad), "scaling", str(tmp_path / "x.svg")))
        rejected = False
    except plots.SchemaError:
        rejected = True
    ok = rendered and rejected
    assert _report("secondary plot tool",
                   ok, f"figures rendered {rendered}, bad header rejected {rejected}")


def test_criterion_8_cli_determinism(tmp_path, capsys):
    pairs = []
    for i in (1, 2):
        p = tmp_path / f"theta{i}.json"
        assert main(["estimate-theta", "--theta", "1.1781", "--k", "4",
                     "--epsilon", "0.1", "--seed", "7", "--output", str(p)]) == 0
        pairs.append(p.read_bytes())
    theta_ok = pairs[0] == pairs[1]
    sweeps = []
    for workers in ("1", "3"):
        p = tmp_path / f"sweep{workers}.csv"
        assert main(["sweep", "--k", "2..3", "--seed", "3", "--trials", "2",
                     "--workers", workers, "--output", str(p)]) == 0
        sweeps.append(p.read_bytes())
    sweep_ok = sweeps[0] == sweeps[1]
    qpes = []
    for i in (1, 2):
        p = tmp_path / f"qpe{i}.json"
        assert main(["qpe", "--theta", "1.0", "--k", "3", "--epsilon", "0.25",
                     "--seed", "11", "--output", str(p)]) == 0
        qpes.append(p.read_bytes())
    qpe_ok = qpes[0] == qpes[1]
    capsys.readouterr()
    ok = theta_ok and sweep_ok and qpe_ok
    assert _report("cli determinism",
                   ok, f"estimate-theta {theta_ok}, sweep across workers "
                       f"{sweep_ok}, qpe {qpe_ok}")
