"""Iterative angle estimation by doubling round trips: Chernoff-sized
cosine stages, sewing the per-level folded angles into a T estimate,
a mirror-break stage, generalized axis-overlap estimation, direction
finding from six axis magnitudes, and full Euler recovery."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log

import numpy as np

from . import frames, runtime
from .frames import (AXIS_X, AXIS_Y, AXIS_Z, AxisPair, EulerAngles, FractionT,
                     IntervalEstimate, Z_PAIR, unit)

TWO_PI = 2.0 * np.pi


def chernoff_n(delta, eps_stage):
    """Repetitions to pin a Bernoulli mean within delta at confidence 1-eps.

    n = ceil((2/delta^2) ln(2/eps)); at delta = 1/4 this is the familiar
    32 ln(2/eps) sizing.
    """
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    if not 0 < eps_stage < 1:
        raise ValueError("eps_stage must lie in (0, 1)")
    return ceil((2.0 / delta ** 2) * log(2.0 / eps_stage))


@dataclass(frozen=True)
class StageEstimate:
    """One doubling level's empirical survival fraction."""

    level: int
    repetitions: int
    p_hat: float
    delta: float

    @property
    def c_hat(self):
        return 2.0 * self.p_hat - 1.0


def _circular(u, v):
    d = np.abs(u - v) % 1.0
    return np.minimum(d, 1.0 - d)


def sew_fraction(c_hats, mirror_phat, flip_level=None):
    """Reconstruct the fraction in [0, 1] from per-level cosine estimates.

    c_hats holds estimates of cos(2 pi 2^j T) for j = 0..k-1 (axis 0 may
    carry a batch on axis 1); mirror_phat estimates (1 + cos(pi T)) / 2.
    Each level's arccos fixes the fractional part of 2^j T up to mirror;
    the halving recursion picks, per level, the half of the refined upper
    estimate closest to the level's candidate pair (ties to the smaller
    value), and the mirror stage finally picks between x and 1 - x.

    flip_level is a test hook: mirror the running state right after the
    named level is set, to exercise the mirror-coherence property.
    """
    arr = np.asarray(c_hats, dtype=float)
    scalar = arr.ndim == 1
    c = arr[:, None] if scalar else arr
    k = c.shape[0]
    a = np.arccos(np.clip(c, -1.0, 1.0)) / TWO_PI
    f = a[-1].copy()
    if flip_level == k - 1:
        f = 1.0 - f
    for j in range(k - 2, -1, -1):
        h0 = f / 2.0
        h1 = h0 + 0.5
        d0 = np.minimum(_circular(h0, a[j]), _circular(h0, 1.0 - a[j]))
        d1 = np.minimum(_circular(h1, a[j]), _circular(h1, 1.0 - a[j]))
        f = np.where(d0 <= d1, h0, h1)
        if flip_level == j:
            f = (1.0 - f) % 1.0
    raw = f
    x = np.where(raw <= 0.5, raw, 1.0 - raw)
    g_x = 0.5 * (1.0 + np.cos(np.pi * x))
    g_mirror = 0.5 * (1.0 + np.cos(np.pi * (1.0 - x)))
    d_x = np.abs(mirror_phat - g_x)
    d_m = np.abs(mirror_phat - g_mirror)
    t = np.where(d_x < d_m, x, np.where(d_m < d_x, 1.0 - x, np.minimum(x, 1.0 - x)))
    if scalar:
        return float(t[0]), float(raw[0])
    return t, raw


def sew_levels(stages, mirror_phat):
    """Sew a list of StageEstimate (levels 0..k-1) into a FractionT."""
    ordered = sorted(stages, key=lambda s: s.level)
    if [s.level for s in ordered] != list(range(len(ordered))):
        raise ValueError("stages must cover levels 0..k-1 exactly once")
    c = [s.c_hat for s in ordered]
    t, _ = sew_fraction(np.asarray(c), mirror_phat)
    return FractionT(t)


@dataclass(frozen=True)
class OverlapEstimate:
    """Folded-angle estimate of the angle between a Bob and an Alice axis."""

    fraction: float          # sewn estimate of gamma / pi, mirror resolved
    folded_angle: float      # min(gamma, pi - gamma) estimate, in radians
    magnitude: float         # |cos gamma| estimate
    sign: str                # '+', '-' or 'unresolved'
    k: int
    epsilon: float
    ledger: runtime.CommLedger

    SIGN_THRESHOLD = 0.25


def _run_stages(session, pair, k, epsilon, rng, delta=0.25):
    """Mirror stage plus k doubling levels on one axis pair."""
    n = chernoff_n(delta, epsilon / (k + 1))
    hits = runtime.sample_forward_spins(
        session, pair.alice_axis, pair.bob_axis, n, rng.derive("mirror"))
    mirror_phat = hits / n
    stages = []
    for j in range(k):
        hits = runtime.sample_round_trips(
            session, 2 ** j, n, rng.derive("level", j), pair)
        stages.append(StageEstimate(j, n, hits / n, delta))
    return stages, mirror_phat, n


def estimate_cosine_level(session, j, n, rng, pair=Z_PAIR):
    """n round-trip exchanges at level j (2^j round trips each)."""
    if j < 0 or n < 1:
        raise ValueError("need j >= 0 and n >= 1")
    hits = runtime.sample_round_trips(session, 2 ** j, n, rng, pair)
    return StageEstimate(j, n, hits / n, 0.25)


def estimate_overlap(session, pair, k, epsilon, rng, delta=0.25):
    """Estimate |cos gamma| for the axis pair, gamma folded into [0, pi/2].

    The doubling levels see only cos(2 pi 2^j gamma/pi), which is blind
    to gamma <-> pi - gamma; the forward-spin mirror stage breaks the
    tie, and the sign is reported only when the magnitude clears 1/4.
    """
    if not 1 <= k <= 16:
        raise ValueError("k must lie in 1..16")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    before = session.ledger.copy()
    stages, mirror_phat, _ = _run_stages(session, pair, k, epsilon, rng, delta)
    g = sew_levels(stages, mirror_phat).value
    folded = np.pi * min(g, 1.0 - g)
    cosine = float(np.cos(np.pi * g))
    magnitude = abs(cosine)
    if magnitude >= OverlapEstimate.SIGN_THRESHOLD:
        sign = "+" if cosine >= 0 else "-"
    else:
        sign = "unresolved"
    return OverlapEstimate(g, float(folded), magnitude, sign, k, epsilon,
                           session.ledger.diff(before))


def estimate_theta(session, k, epsilon, rng, delta=0.25):
    """k-bit estimate of T = theta/pi on the canonical z/z pair.

    Runs the identical transcript as estimate_overlap on (z, z); the
    sewn fraction is returned with nominal half-width 2^-(k+1).
    """
    est = estimate_overlap(session, Z_PAIR, k, epsilon, rng, delta)
    return IntervalEstimate(est.fraction, 2.0 ** -(k + 1), k, epsilon)


# Six probe axes: the three coordinate axes plus the three diagonal
# bisectors whose squared overlaps expose the pairwise products.
PROBE_AXES = (
    AXIS_X,
    AXIS_Y,
    AXIS_Z,
    unit(AXIS_X + AXIS_Y),
    unit(AXIS_Y + AXIS_Z),
    unit(AXIS_Z + AXIS_X),
)

_DIAG_PAIRS = {(0, 1): 3, (1, 2): 4, (2, 0): 5}


def find_direction(session, k, epsilon, rng, alice_axis=AXIS_Z):
    """Locate an Alice axis in Bob's frame from six overlap magnitudes.

    Component magnitudes come from the coordinate axes; the diagonal
    axes give u_a*u_b = overlap^2 - (u_a^2 + u_b^2)/2, used to propagate
    signs from the largest component whenever both components exceed
    tau = 2^(1-k). A final forward-spin stage fixes the global sign.
    Returns the unit estimate and a FidelityReport against the truth.
    """
    from .analysis import FidelityReport

    if not 1 <= k <= 16:
        raise ValueError("k must lie in 1..16")
    before = session.ledger.copy()
    estimates = []
    for i, axis in enumerate(PROBE_AXES):
        pair = AxisPair(axis, alice_axis)
        estimates.append(
            estimate_overlap(session, pair, k, epsilon / 7.0, rng.derive("axis", i)))
    mags = [e.magnitude for e in estimates]
    comp = np.array(mags[:3])
    tau = 2.0 ** (1 - k)
    cross = {}
    for (a, b), idx in _DIAG_PAIRS.items():
        cross[(a, b)] = mags[idx] ** 2 - (comp[a] ** 2 + comp[b] ** 2) / 2.0
    anchor = int(np.argmax(comp))
    signs = np.ones(3)
    for other in range(3):
        if other == anchor:
            continue
        key = (anchor, other) if (anchor, other) in cross else (other, anchor)
        if comp[anchor] > tau and comp[other] > tau:
            signs[other] = 1.0 if cross[key] >= 0 else -1.0
    u_hat = signs * comp
    norm = np.linalg.norm(u_hat)
    u_hat = u_hat / norm if norm > 0 else AXIS_Z.copy()
    # antipodal resolution: forward spins along the Alice axis, measured
    # along the candidate; keep the orientation that agrees more often
    n_sign = chernoff_n(0.25, epsilon / 7.0)
    hits = runtime.sample_forward_spins(
        session, alice_axis, u_hat, n_sign, rng.derive("orientation"))
    if hits / n_sign < 0.5:
        u_hat = -u_hat
    u_true = frames.axis_in_bob_frame(session.angles, alice_axis)
    cos_err = float(np.clip(u_hat @ u_true, -1.0, 1.0))
    delta_alpha = float(np.arccos(cos_err))
    report = FidelityReport(
        truth_direction=u_true,
        truth_angles=session.angles,
        estimate=u_hat,
        delta_alpha=delta_alpha,
        fidelity=0.5 * (1.0 + cos_err),
        success=delta_alpha <= TWO_PI * 2.0 ** -k,
        ledger=session.ledger.diff(before),
    )
    return u_hat, report


def estimate_euler(session, k, epsilon, rng):
    """Recover all three Euler angles from the z and x column directions.

    Two direction findings (budget epsilon/2 each, the second with Alice
    preparing along her x axis) feed the column reconstruction; a
    DegenerateInput from near-parallel estimates propagates untouched.
    """
    col_z, _ = find_direction(session, k, epsilon / 2.0, rng.derive("col_z"),
                              alice_axis=AXIS_Z)
    col_x, _ = find_direction(session, k, epsilon / 2.0, rng.derive("col_x"),
                              alice_axis=AXIS_X)
    return frames.euler_from_columns(col_z, col_x)
