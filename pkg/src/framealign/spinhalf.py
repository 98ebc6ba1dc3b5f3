"""Exact spin-1/2 linear algebra: 2x2 unitaries, qubit states, frame
conjugation, rotation powers, Born-rule sampling, and a small dense
multi-qubit statevector for the phase-estimation register."""

from __future__ import annotations

import numpy as np

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

Z_PLUS = np.array([1, 0], dtype=complex)
Z_MINUS = np.array([0, 1], dtype=complex)

MAX_QUBITS = 24


def _angles(angles):
    """Accept an EulerAngles-like object or a (phi, theta, psi) triple."""
    if hasattr(angles, "phi"):
        return angles.phi, angles.theta, angles.psi
    phi, theta, psi = angles
    return phi, theta, psi


def rot_z(angle):
    """exp(-i*angle*sigma_z/2)."""
    return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]])


def rot_y(angle):
    """exp(-i*angle*sigma_y/2)."""
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def euler_rotation(angles):
    """SU(2) rotation for ZYZ Euler angles (phi, theta, psi).

    Defined by the operator product
    exp(-i*psi*sz/2) exp(-i*theta*sy/2) exp(-i*phi*sz/2); the product
    form is authoritative and always special-unitary.
    """
    phi, theta, psi = _angles(angles)
    return rot_z(psi) @ rot_y(theta) @ rot_z(phi)


def alice_conjugate(op, angles):
    """Alice's operator written in Bob's frame: R^dagger op R."""
    r = euler_rotation(angles)
    return r.conj().T @ op @ r


def u_generator(angles):
    """One full round trip: sigma_z * sigma_z^A, in closed form.

    Equals [[cos t, -e^{i phi} sin t], [e^{-i phi} sin t, cos t]] with
    t the polar Euler angle; the psi angle drops out.
    """
    phi, theta, _ = _angles(angles)
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * phi)
    return np.array([[c, -e * s], [np.conj(e) * s, c]])


def u_power(angles, m):
    """Closed form of the m-th power of the round-trip unitary.

    The generator is cos(t) I + sin(t) K with K^2 = -I, so powers just
    multiply the angle: diagonal cos(m t), off-diagonal -+ e^{+-i phi} sin(m t).
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    phi, theta, _ = _angles(angles)
    c, s = np.cos(m * theta), np.sin(m * theta)
    e = np.exp(1j * phi)
    return np.array([[c, -e * s], [np.conj(e) * s, c]])


def survival_probability(u, probe):
    """|<probe| u |probe>|^2 for a normalized probe state."""
    amp = np.vdot(probe, u @ probe)
    return float(min(1.0, abs(amp) ** 2))


def measure(probs, rng):
    """Sample an outcome index from a probability vector.

    Consumes exactly one uniform draw from the stream, so interleaved
    protocols stay reproducible draw-for-draw.
    """
    p = np.asarray(probs, dtype=float)
    if (p < -1e-12).any():
        raise ValueError("negative probability")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("probabilities must sum to 1")
    u = rng.random()
    cum = np.cumsum(np.clip(p, 0.0, 1.0))
    return int(np.searchsorted(cum, u, side="right").clip(0, len(p) - 1))


def bloch_state(direction):
    """Spin-up state along a unit Bloch vector."""
    x, y, z = direction
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    azim = np.arctan2(y, x)
    return np.array([np.cos(theta / 2), np.exp(1j * azim) * np.sin(theta / 2)])


def bloch_vector(state):
    """Bloch vector <sigma> of a pure qubit state."""
    a, b = state
    return np.array([
        2 * np.real(np.conj(a) * b),
        2 * np.imag(np.conj(a) * b),
        abs(a) ** 2 - abs(b) ** 2,
    ])


def is_unitary(mat, tol=1e-12):
    dev = mat.conj().T @ mat - np.eye(mat.shape[0])
    return np.abs(dev).max() <= tol


def is_special_unitary(mat, tol=1e-12):
    return is_unitary(mat, tol) and abs(np.linalg.det(mat) - 1.0) <= tol


def phase_distance(a, b):
    """Max elementwise deviation after fitting the best global phase."""
    inner = np.vdot(a, b)
    if abs(inner) < 1e-300:
        return float(np.abs(a - b).max())
    phase = inner / abs(inner)
    return float(np.abs(a * phase - b).max())


class MultiQubitState:
    """Dense statevector on q qubits (q <= 24), little-endian bit order.

    Qubit t has weight 2^t in the basis index. Gates act in place on a
    copy-on-write ndarray; norm is preserved to 1e-9 over any gate
    sequence used here.
    """

    def __init__(self, qubits, amplitudes=None):
        if not 1 <= qubits <= MAX_QUBITS:
            raise ValueError("qubit count out of range")
        self.qubits = qubits
        if amplitudes is None:
            amps = np.zeros(2 ** qubits, dtype=complex)
            amps[0] = 1.0
        else:
            amps = np.asarray(amplitudes, dtype=complex).reshape(2 ** qubits).copy()
        self.amplitudes = amps

    def _axis(self, qubit):
        # reshape([2]*q) puts the most significant bit on axis 0
        return self.qubits - 1 - qubit

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def apply_1q(self, mat, qubit):
        q = self.qubits
        psi = self.amplitudes.reshape([2] * q)
        psi = np.moveaxis(psi, self._axis(qubit), -1)
        psi = psi @ np.asarray(mat, dtype=complex).T
        self.amplitudes = np.moveaxis(psi, -1, self._axis(qubit)).reshape(-1)
        return self

    def apply_controlled(self, mat, control, target):
        if control == target:
            raise ValueError("control and target must differ")
        q = self.qubits
        psi = self.amplitudes.reshape([2] * q).copy()
        axis_c, axis_t = self._axis(control), self._axis(target)
        idx = [slice(None)] * q
        idx[axis_c] = 1
        idx = tuple(idx)
        # slicing away the control axis shifts later axes down by one
        block_axis = axis_t if axis_t < axis_c else axis_t - 1
        block = np.moveaxis(psi[idx], block_axis, -1)
        block = block @ np.asarray(mat, dtype=complex).T
        psi[idx] = np.moveaxis(block, -1, block_axis)
        self.amplitudes = psi.reshape(-1)
        return self

    def qft_low(self, width):
        """QFT on qubits 0..width-1 (kernel e^{+2 pi i j m / N}/sqrt(N))."""
        n = 2 ** width
        rest = 2 ** (self.qubits - width)
        a = self.amplitudes.reshape(rest, n)
        self.amplitudes = (np.fft.ifft(a, axis=1) * np.sqrt(n)).reshape(-1)
        return self

    def iqft_low(self, width):
        """Inverse QFT on qubits 0..width-1."""
        n = 2 ** width
        rest = 2 ** (self.qubits - width)
        a = self.amplitudes.reshape(rest, n)
        self.amplitudes = (np.fft.fft(a, axis=1) / np.sqrt(n)).reshape(-1)
        return self

    def probabilities(self, low_width=None):
        """Outcome probabilities; optionally marginal over the low qubits."""
        p = np.abs(self.amplitudes) ** 2
        if low_width is None:
            return p
        rest = 2 ** (self.qubits - low_width)
        return p.reshape(rest, 2 ** low_width).sum(axis=0)
