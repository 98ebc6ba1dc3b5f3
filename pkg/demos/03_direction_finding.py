"""Locating Alice's z axis in Bob's coordinates.

Six axis overlaps (three coordinate axes, three diagonals) give the
component magnitudes and the pairwise products that sign them; a final
batch of forward spins settles the overall orientation. The fidelity is
compared with the closed-form floor used in the scaling analysis.
"""

import numpy as np

from framealign import EulerAngles, RngStream, Session, fidelity_bound, find_direction
from framealign.frames import axis_in_bob_frame, AXIS_Z

angles = EulerAngles(2.4, 1.1, 5.3)
truth = axis_in_bob_frame(angles, AXIS_Z)
print("true direction of Alice's z in Bob's frame:", np.round(truth, 6))

for k in (3, 5, 7):
    eps = 4.0 ** -k
    session = Session(angles, master_seed=99)
    u_hat, report = find_direction(session, k, eps, RngStream(99).derive("dir", k))
    print(f"\nk = {k} (epsilon = {eps:.2e})")
    print(f"  estimate : {np.round(u_hat, 6)}")
    print(f"  fidelity : {report.fidelity:.8f}  (angle error {report.delta_alpha:.2e} rad)")
    print(f"  floor    : {fidelity_bound(k, eps):.8f} (closed form)")
    led = report.ledger
    print(f"  cost     : {led.forward_qubits + led.backward_qubits} one-way qubits")
