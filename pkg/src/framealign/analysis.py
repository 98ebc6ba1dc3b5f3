"""Worst-case fidelity analysis: the closed-form bound, adversarial
frame grids, scaling sweeps with slope fits, and deterministic CSV/JSON
emission of results."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import frames
from .frames import EulerAngles
from .runtime import CommLedger, RngStream, Session

SWEEP_HEADER = "k,epsilon,n_stage,roundtrips_formula,oneway_qubits,trials,f_min,f_mean,f_bound_paper,seed"
VIGNETTE_HEADER = "vignette,trials,avg_fidelity,stderr,fwd_qubits,bwd_qubits,fwd_cbits,bwd_cbits,seed"


@dataclass(frozen=True)
class FidelityReport:
    """One direction-finding trial compared against the hidden truth."""

    truth_direction: np.ndarray
    truth_angles: EulerAngles
    estimate: np.ndarray
    delta_alpha: float
    fidelity: float
    success: bool
    ledger: CommLedger


@dataclass(frozen=True)
class SweepRow:
    k: int
    epsilon: float
    n_stage: int
    roundtrips_formula: int
    oneway_qubits: int
    trials: int
    f_min: float
    f_mean: float
    f_bound_paper: float
    seed: int


def fidelity_bound(k, epsilon):
    """Closed-form worst-case fidelity floor (1-eps)^2 (1 - 2 pi^2 / 4^k)."""
    if k < 1 or not 0.0 <= epsilon <= 1.0:
        raise ValueError("need k >= 1 and epsilon in [0, 1]")
    return (1.0 - epsilon) ** 2 * (1.0 - 2.0 * np.pi ** 2 * 4.0 ** -k)


def _frame_from_direction(u, psi=0.777):
    """A frame whose z column in Bob's coordinates equals the unit vector u."""
    u = frames.unit(u)
    theta = float(np.arccos(np.clip(u[2], -1.0, 1.0)))
    phi = float(np.arctan2(u[1], -u[0])) % (2.0 * np.pi)
    return EulerAngles(phi, theta, psi)


# Directions with mid-sized mixed-sign components: hard for sign
# propagation at small k, fully resolved once tau = 2^(1-k) drops.
_MIXED_DIRECTIONS = (
    (0.72, -0.49, -0.49),
    (-0.48, -0.48, 0.735),
    (0.577, -0.577, 0.577),
    (-0.24, 0.94, -0.24),
    (-0.6, 0.55, -0.58),
    (0.49, 0.72, -0.49),
)

_GRID_PHI, _GRID_PSI = 1.234, 0.777


def adversarial_grid(k, seed):
    """Deterministic worst-case frame grid for the given bit depth.

    Covers the identity, dyadic and near-boundary T values, non-dyadic
    T, directions with a near-zero component, mixed-sign mid-magnitude
    directions, and 16 seeded uniform frames.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    grid = [frames.IDENTITY_FRAME]
    t_values = (2.0 ** -k, 0.25, 0.5, 0.75,
                0.5 + 2.0 ** -(k + 2), 0.5 - 2.0 ** -(k + 2),
                1.0 / 3.0, 0.7071067811865476)
    for t in t_values:
        grid.append(EulerAngles(_GRID_PHI, np.pi * t, _GRID_PSI))
    for phi in (np.pi / 2 - 2.0 ** -(k + 1), 2.0 ** -(k + 1)):
        grid.append(EulerAngles(phi, np.pi / 3, _GRID_PSI))
    for u in _MIXED_DIRECTIONS:
        grid.append(_frame_from_direction(np.array(u)))
    rng = RngStream(seed).derive("grid", k)
    for _ in range(16):
        grid.append(frames.random_frame(rng))
    return grid


def _sweep_one_k(k, trials, seed):
    from .iterative import chernoff_n, find_direction

    epsilon = 4.0 ** -k
    grid = adversarial_grid(k, seed)
    frame_means = []
    rt_formula = oneway = 0
    for fi, frame in enumerate(grid):
        fids = []
        for t in range(trials):
            session = Session(frame, master_seed=seed)
            rng = RngStream(seed).derive("sweep", k, fi, t)
            try:
                _, report = find_direction(session, k, epsilon, rng)
            except ArithmeticError:
                # estimator failure counts as a zero-fidelity trial; the
                # sweep itself never aborts
                fids.append(0.0)
                continue
            fids.append(report.fidelity)
            if fi == 0 and t == 0:
                led = report.ledger
                rt_formula = led.backward_qubits
                oneway = led.forward_qubits + led.backward_qubits
        frame_means.append(float(np.mean(fids)))
    n_stage = chernoff_n(0.25, (epsilon / 7.0) / (k + 1))
    return SweepRow(k, epsilon, n_stage, rt_formula, oneway, trials,
                    float(np.min(frame_means)), float(np.mean(frame_means)),
                    fidelity_bound(k, epsilon), seed)


def scaling_sweep(k_range, trials, seed, workers=1):
    """Direction-finding fidelity over the adversarial grid, per bit depth.

    Each k uses epsilon = 4^-k. Failed estimator runs would surface as
    rows flagged by exceptions; the sweep itself never aborts.
    """
    ks = sorted(k_range)
    if not ks or ks[0] < 2 or ks[-1] > 8:
        raise ValueError("k_range must lie within [2, 8]")
    rows = []
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda k: _sweep_one_k(k, trials, seed), ks))
    else:
        for k in ks:
            rows.append(_sweep_one_k(k, trials, seed))
    return rows


def fit_scaling_slope(rows, x_field="roundtrips_formula"):
    """Least-squares slope of log2(1 - f_min) against log2 of the cost."""
    xs = np.log2([getattr(r, x_field) for r in rows])
    ys = np.log2([max(1.0 - r.f_min, 1e-18) for r in rows])
    return float(np.polyfit(xs, ys, 1)[0])


def _fmt(value):
    """Deterministic 17-significant-digit text for floats."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def to_json_text(obj, indent=0):
    """Serializer with fixed float formatting, for byte-stable output."""
    pad = "  " * indent
    if isinstance(obj, dict):
        items = [f'{pad}  "{k}": {to_json_text(v, indent + 1).lstrip()}'
                 for k, v in obj.items()]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [to_json_text(v, indent + 1) for v in obj]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if obj is None:
        return pad + "null"
    if isinstance(obj, str):
        return pad + json.dumps(obj)
    return pad + _fmt(obj)


def sweep_csv_lines(rows):
    lines = [SWEEP_HEADER]
    for r in rows:
        lines.append(",".join([
            str(r.k), _fmt(r.epsilon), str(r.n_stage), str(r.roundtrips_formula),
            str(r.oneway_qubits), str(r.trials), _fmt(r.f_min), _fmt(r.f_mean),
            _fmt(r.f_bound_paper), str(r.seed),
        ]))
    return lines


def vignette_csv_lines(results, seed):
    lines = [VIGNETTE_HEADER]
    for r in results:
        led = r.ledger
        lines.append(",".join([
            r.name, str(r.trials), _fmt(r.avg_fidelity), _fmt(r.stderr),
            str(led.forward_qubits), str(led.backward_qubits),
            str(led.forward_cbits), str(led.backward_cbits), str(seed),
        ]))
    return lines


def estimate_report(protocol, k, epsilon, seed, estimate_t, truth_t, ledger,
                    half_width):
    """The structured record for a single estimation run."""
    success = min(abs(estimate_t - truth_t),
                  abs(estimate_t - (1.0 - truth_t))) <= half_width
    return {
        "protocol": protocol,
        "k": k,
        "epsilon": epsilon,
        "seed": seed,
        "estimate": {"t": estimate_t, "theta_rad": np.pi * estimate_t,
                     "half_width": half_width},
        "truth": {"t": truth_t, "theta_rad": np.pi * truth_t},
        "success": bool(success),
        "ledger": ledger.as_dict(),
    }


def _jsonable(obj):
    if isinstance(obj, SweepRow):
        return {f: getattr(obj, f) for f in SWEEP_HEADER.split(",")}
    if hasattr(obj, "avg_fidelity"):
        return {"vignette": obj.name, "trials": obj.trials,
                "avg_fidelity": obj.avg_fidelity, "stderr": obj.stderr,
                "ledger": obj.ledger.as_dict()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def emit(results, fmt, path, seed=0):
    """Write rows or a report to disk; byte-identical for identical input.

    CSV accepts SweepRow or VignetteResult lists; JSON accepts those or
    any structure of dicts, lists and plain values.
    """
    if fmt == "csv":
        if results and isinstance(results[0], SweepRow):
            lines = sweep_csv_lines(results)
        elif results and hasattr(results[0], "avg_fidelity"):
            lines = vignette_csv_lines(results, seed)
        elif not results:
            lines = [SWEEP_HEADER]
        else:
            raise ValueError("unsupported row type for CSV emission")
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        text = to_json_text(_jsonable(results)) + "\n"
    else:
        raise ValueError("format must be 'csv' or 'json'")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return text
