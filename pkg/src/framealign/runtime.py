"""Two-party protocol runtime: a Session hiding the true frame, exact
communication accounting, and counter-based random streams that make
every run bit-reproducible regardless of scheduling."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import frames, spinhalf
from .frames import AxisPair, EulerAngles, Z_PAIR

_MASK64 = (1 << 64) - 1

ENCODING_MULTIPLIER = {
    "bare": 1,
    "logical-triple": 3,   # three physical spins per frame-invariant qubit
    "clock-qubit": 1,      # shared clock: energy eigenstates ship one-for-one
}


def stream_index(*labels):
    """Stable 64-bit index from arbitrary labels (platform independent)."""
    data = "|".join(str(x) for x in labels).encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "big")


class RngStream:
    """Counter-based stream keyed by (master seed, stream index).

    Identical (seed, index, draw count) always yields identical output;
    derived streams never collide with their parents in practice, so
    trials and stages can be sampled in any order or in parallel.
    """

    def __init__(self, master_seed, index=0):
        self.master_seed = int(master_seed) & _MASK64
        self.index = int(index) & _MASK64
        key = np.array([self.master_seed, self.index], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def derive(self, *labels):
        return RngStream(self.master_seed, stream_index(self.index, *labels))

    def random(self, size=None):
        return self._gen.random(size)


@dataclass
class CommLedger:
    """Counts of one-way transmissions plus round accounting.

    Qubit counts are logical; multiply by `multiplier` for physical
    spins under an encoding. rounds_parallel is a watermark: the depth
    of the deepest exchange, assuming everything else ships alongside.
    """

    forward_qubits: int = 0
    backward_qubits: int = 0
    forward_cbits: int = 0
    backward_cbits: int = 0
    rounds_sequential: int = 0
    rounds_parallel: int = 0
    multiplier: int = 1

    COUNT_FIELDS = ("forward_qubits", "backward_qubits",
                    "forward_cbits", "backward_cbits", "rounds_sequential")

    @property
    def physical_forward_qubits(self):
        return self.forward_qubits * self.multiplier

    @property
    def physical_backward_qubits(self):
        return self.backward_qubits * self.multiplier

    def record_round_trips(self, m, reps=1):
        """reps independent exchanges of m round trips each."""
        self.forward_qubits += m * reps
        self.backward_qubits += m * reps
        self.rounds_sequential += 2 * m * reps
        self.rounds_parallel = max(self.rounds_parallel, 2 * m)

    def record_forward_spins(self, reps=1):
        self.forward_qubits += reps
        self.rounds_sequential += reps
        self.rounds_parallel = max(self.rounds_parallel, 1)

    def record_backward_qubits(self, reps=1):
        self.backward_qubits += reps
        self.rounds_sequential += reps
        self.rounds_parallel = max(self.rounds_parallel, 1)

    def record_cbits(self, direction, count):
        if count < 0:
            raise ValueError("cbit count must be non-negative")
        if direction == "forward":
            self.forward_cbits += count
        elif direction == "backward":
            self.backward_cbits += count
        else:
            raise ValueError("direction must be 'forward' or 'backward'")

    def copy(self):
        return replace(self)

    def diff(self, before):
        """Ledger slice accumulated since `before` (a prior copy)."""
        out = CommLedger(multiplier=self.multiplier,
                         rounds_parallel=self.rounds_parallel)
        for f in self.COUNT_FIELDS:
            setattr(out, f, getattr(self, f) - getattr(before, f))
        return out

    def merge(self, other):
        """Aggregate another ledger (counts add, parallel depth maxes)."""
        for f in self.COUNT_FIELDS:
            setattr(self, f, getattr(self, f) + getattr(other, f))
        self.rounds_parallel = max(self.rounds_parallel, other.rounds_parallel)
        return self

    def as_dict(self):
        return {
            "fwd_qubits": self.forward_qubits,
            "bwd_qubits": self.backward_qubits,
            "fwd_cbits": self.forward_cbits,
            "bwd_cbits": self.backward_cbits,
            "rounds_seq": self.rounds_sequential,
            "rounds_par": self.rounds_parallel,
        }


@dataclass
class Session:
    """One protocol run against a hidden frame.

    The hidden angles are the simulator's ground truth; protocol code
    only ever sees measurement outcomes, while reports may compare
    against the truth after the fact.
    """

    angles: EulerAngles
    master_seed: int = 0
    encoding: str = "bare"
    ledger: CommLedger = field(default_factory=CommLedger)

    def __post_init__(self):
        if self.encoding not in ENCODING_MULTIPLIER:
            raise ValueError(f"unknown encoding {self.encoding!r}")
        self.ledger.multiplier = ENCODING_MULTIPLIER[self.encoding]

    def rng_root(self):
        return RngStream(self.master_seed)


def round_trip_probability(angles, m, pair=Z_PAIR):
    """Probability of outcome 0 after m round trips on the given axes.

    The two pi-rotations compose to a rotation by twice the inter-axis
    angle gamma, so the probe survives with probability cos^2(m*gamma).
    """
    gamma = np.arccos(np.clip(frames.overlap(pair, angles), -1.0, 1.0))
    return float(np.cos(m * gamma) ** 2)


def forward_spin_probability(angles, alice_axis, bob_axis):
    """Probability Bob sees outcome 0 for one spin Alice sends along her axis."""
    ov = frames.overlap(AxisPair(bob_axis, alice_axis), angles)
    return 0.5 * (1.0 + ov)


def round_trip(session, m, rng, pair=Z_PAIR):
    """One exchange block: Bob's probe makes m round trips, then is measured.

    Outcome 0 is survival. Ledger: m forward plus m backward qubits,
    2m sequential rounds.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    p0 = round_trip_probability(session.angles, m, pair)
    outcome = spinhalf.measure([p0, 1.0 - p0], rng)
    session.ledger.record_round_trips(m)
    return outcome


def round_trip_z(session, m, rng):
    """Round trips on the canonical z/z axis pair."""
    return round_trip(session, m, rng, Z_PAIR)


def forward_spin(session, alice_axis, bob_axis, rng):
    """Alice sends spin-up along her axis; Bob measures along his."""
    p0 = forward_spin_probability(session.angles, alice_axis, bob_axis)
    outcome = spinhalf.measure([p0, 1.0 - p0], rng)
    session.ledger.record_forward_spins(1)
    return outcome


def send_cbits(session, direction, count):
    """Classical bits carry protocol data only; ledger accounting alone."""
    session.ledger.record_cbits(direction, count)


def sample_round_trips(session, m, n, rng, pair=Z_PAIR):
    """n independent m-round-trip exchanges; returns the outcome-0 count.

    Statistically identical to n round_trip calls on the same stream,
    drawn as one batch for speed.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    p0 = round_trip_probability(session.angles, m, pair)
    hits = int(np.count_nonzero(rng.random(n) < p0))
    session.ledger.record_round_trips(m, reps=n)
    return hits

def sample_forward_spins(session, alice_axis, bob_axis, n, rng):
    """n independent forward spins; returns the outcome-0 count."""
    if n < 1:
        raise ValueError("n must be positive")
    p0 = forward_spin_probability(session.angles, alice_axis, bob_axis)
    hits = int(np.count_nonzero(rng.random(n) < p0))
    session.ledger.record_forward_spins(reps=n)
    return hits
