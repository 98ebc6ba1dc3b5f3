"""The register-based variant: all doubling levels in superposition.

A uniform control register drives controlled round-trip powers on one
work spin; the eigenphases kick back onto the control amplitudes and an
inverse Fourier transform reads them out. Because the work spin starts
as an equal mix of the two eigenstates, the outcome distribution has
two mirrored peaks and either one recovers T.
"""

import numpy as np

from framealign import EulerAngles, RngStream, Session, qpe_ledger, register_size, run_qpe
from framealign.qpe import fold_outcome, run_register

truth_t = 1.0 / 3.0
angles = EulerAngles(0.7, np.pi * truth_t, 1.9)
k, eps = 4, 0.25
x = register_size(k, eps)
print(f"k = {k}, epsilon = {eps} -> register of {x} control qubits")

probs = run_register(angles, x)
top = np.argsort(probs)[-6:][::-1]
print("\nmost likely outcomes (exact distribution):")
for y in top:
    print(f"  y = {y:3d}: p = {probs[y]:.4f} -> T_hat = {fold_outcome(int(y), x):.6f}")

hits = 0
trials = 400
for t in range(trials):
    session = Session(angles, master_seed=t)
    est = run_qpe(session, k, eps, RngStream(t).derive("qpe"))
    hits += abs(est.value - truth_t) <= 2.0 ** -(k + 1)
print(f"\nsampled success rate over {trials} runs: {hits / trials:.3f}"
      f" (floor {1 - eps})")

for mode in ("clock-qubit", "logical-triple"):
    cost = qpe_ledger(k, eps, mode)
    print(f"{mode:>15}: work spin {cost.work_oneway} one-way,"
          f" control {cost.control_oneway_physical} physical one-way"
          f" (x{cost.multiplier} encoding)")
