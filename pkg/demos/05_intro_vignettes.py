"""The single-shot protocols: what one or two qubits buy you.

Backward communication plus a classical bit matches a forward spin
exactly; an extra anti-aligned spin prepares the antiparallel pair; and
returning an entangled qubit through Alice's z rotation lets a Bell
measurement with a conditioned single-spin measurement reach the
three-parallel-spin fidelity of 4/5 with no joint decoding.
"""

from framealign import (antiparallel_pair, antiparallel_two_backward,
                        entangled_sigma_z, forward_spins_avg,
                        optimize_feedforward, singlet_steering)

TRIALS = 300_000

rows = [
    forward_spins_avg(1, TRIALS, seed=1, guess="random"),
    forward_spins_avg(1, TRIALS, seed=2),
    singlet_steering(TRIALS, seed=3),
    forward_spins_avg(2, TRIALS, seed=4),
    forward_spins_avg(3, TRIALS, seed=5),
    antiparallel_pair(TRIALS, seed=6),
    antiparallel_two_backward(TRIALS, seed=7),
    entangled_sigma_z(TRIALS, seed=8),
]

print(f"{'vignette':>28} {'F_avg':>8} {'+-':>7}   fwd/bwd qubits, fwd cbits")
for r in rows:
    led = r.ledger
    print(f"{r.name:>28} {r.avg_fidelity:8.4f} {r.stderr:7.4f}   "
          f"{led.forward_qubits}/{led.backward_qubits} qubits, "
          f"{led.forward_cbits} cbits")

strategy, value = optimize_feedforward()
print(f"\noptimized feedforward objective (closed form): {value:.6f}")
print("per Bell outcome the measurement axis aligns with the outcome's")
print("tagged coordinate axis and the two guesses point along +-that axis.")
bell = rows[-1]
print("observed Bell outcome frequencies:",
      [round(f, 4) for f in bell.stats["bell_outcome_freqs"]],
      "(the fourth is exactly forbidden)")
