"""A single spin bounced between two misaligned labs.

Bob prepares spin-up along his z axis and sends it to Alice; each party
applies a pi rotation about its own z. Because the two z axes differ by
the Euler angle theta, one round trip rotates the spin by 2*theta, and m
round trips by 2*m*theta: the survival probability traces a cosine whose
frequency doubles with every extra exchange. That doubling is what the
estimation protocol exploits level by level.
"""

import numpy as np

from framealign import EulerAngles, spinhalf

angles = EulerAngles(phi=0.9, theta=np.pi * 0.3, psi=2.1)

print("hidden frame:", angles)
print("\nround-trip unitary (one exchange):")
print(np.round(spinhalf.u_generator(angles), 4))

print("\nsurvival probability of |z+> after m round trips:")
for m in (1, 2, 4, 8, 16):
    u = spinhalf.u_power(angles, m)
    p = spinhalf.survival_probability(u, spinhalf.Z_PLUS)
    bar = "#" * int(round(40 * p))
    print(f"  m = {m:3d}: {p:.4f} {bar}")

print("\nclosed form matches the slow route (multiplying m copies):")
acc = np.eye(2, dtype=complex)
for _ in range(16):
    acc = spinhalf.u_generator(angles) @ acc
dev = np.abs(acc - spinhalf.u_power(angles, 16)).max()
print(f"  max deviation at m = 16: {dev:.2e}")
