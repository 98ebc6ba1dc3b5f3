"""Fourier-transform phase estimation of the round-trip unitary on a
simulated control register, plus the communication cost accounting for
frame-invariant encodings of the control qubits."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2

import numpy as np

from . import spinhalf
from .runtime import CommLedger, ENCODING_MULTIPLIER
from .frames import FractionT

MAX_CONTROL_QUBITS = 20


def register_size(k, epsilon):
    """Control qubits needed for a k-bit estimate at confidence 1-epsilon:
    x = k + ceil(log2(2 + 1/(2 epsilon)))."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return k + ceil(log2(2.0 + 1.0 / (2.0 * epsilon)))


class QpeRegister:
    """x control qubits plus one work spin, as a dense statevector.

    Control qubit t carries weight 2^t in the measured integer; the work
    spin sits above the controls.
    """

    def __init__(self, x):
        if not 1 <= x <= MAX_CONTROL_QUBITS:
            raise ValueError("control register size out of range")
        self.x = x
        self.state = spinhalf.MultiQubitState(x + 1)

    @property
    def work(self):
        return self.x

    def prepare(self):
        """Uniform superposition on the controls, |z+> on the work spin."""
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        for t in range(self.x):
            self.state.apply_1q(h, t)
        return self

    def outcome_probabilities(self):
        return self.state.probabilities(low_width=self.x)


def run_register(angles, x):
    """Evolve the register: controlled powers, inverse transform, probabilities.

    Control t applies the 2^t-th power of the round-trip unitary to the
    work spin; the phases e^{+-i 2^t theta} kick back onto the control
    amplitudes, and the inverse Fourier transform concentrates them near
    the integer encodings of the two eigenphases.
    """
    reg = QpeRegister(x).prepare()
    for t in range(x):
        reg.state.apply_controlled(spinhalf.u_power(angles, 2 ** t), t, reg.work)
    reg.state.iqft_low(x)
    norm = reg.state.norm()
    if abs(norm - 1.0) > 1e-9:
        raise ArithmeticError("register norm drifted")
    return reg.outcome_probabilities()


def fold_outcome(y, x):
    """Map a register outcome to the T estimate for the eigenphase pair.

    The work spin weights both eigenvalues e^{+-i pi T} equally, so the
    outcome lands near 2^x T/2 or 2^x (1 - T/2); folding the smaller
    distance to the edge recovers T.
    """
    f = y / 2.0 ** x
    return 2.0 * min(f, 1.0 - f)


def run_qpe(session, k, epsilon, rng):
    """One phase-estimation run; returns the FractionT estimate.

    Samples the exact outcome distribution with a single stream draw and
    charges the session ledger for the register exchange.
    """
    x = register_size(k, epsilon)
    if x > MAX_CONTROL_QUBITS:
        raise ValueError("register too large to simulate")
    probs = run_register(session.angles, x)
    y = spinhalf.measure(probs, rng)
    cost = qpe_ledger(k, epsilon, session.encoding)
    session.ledger.merge(cost.ledger)
    return FractionT(fold_outcome(y, x))


@dataclass(frozen=True)
class QpeCost:
    """One-way transmission counts for a register run.

    The work spin makes 2^j controlled round trips per level j; each
    level also ships its control qubit to Alice and back. Only control
    qubits pay the encoding multiplier; the work spin is a bare spin.
    """

    x: int
    mode: str
    work_oneway: int
    control_oneway: int
    control_oneway_physical: int
    multiplier: int
    ledger: CommLedger

    @property
    def total_oneway_physical(self):
        return self.work_oneway + self.control_oneway_physical


def qpe_ledger(k, epsilon, mode):
    """Cost of a full register run under the given encoding mode."""
    if mode not in ENCODING_MULTIPLIER:
        raise ValueError(f"unknown encoding {mode!r}")
    x = register_size(k, epsilon)
    mult = ENCODING_MULTIPLIER[mode]
    work = 2 * (2 ** x - 1)       # sum over levels of 2 * 2^j one-way legs
    control = 2 * x               # each control qubit travels out and back
    ledger = CommLedger(multiplier=1)
    ledger.forward_qubits = work // 2 + (control // 2) * mult
    ledger.backward_qubits = work // 2 + (control // 2) * mult
    ledger.rounds_sequential = work + control
    ledger.rounds_parallel = work  # controls ride along the work spin legs
    return QpeCost(x, mode, work, control, control * mult, mult, ledger)
