"""Frame relations between the two parties: ZYZ Euler angles, the T
fraction of the polar angle, unit directions, axis overlaps, and Euler
reconstruction from estimated rotation columns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spinhalf

TWO_PI = 2.0 * np.pi

AXIS_X = np.array([1.0, 0.0, 0.0])
AXIS_Y = np.array([0.0, 1.0, 0.0])
AXIS_Z = np.array([0.0, 0.0, 1.0])


class DegenerateInput(ValueError):
    """Raised when reconstruction inputs are too close to parallel."""


def wrap_angle(a):
    """a mod 2*pi, guaranteed strictly below 2*pi despite rounding."""
    w = float(a) % TWO_PI
    return 0.0 if w >= TWO_PI else w


@dataclass(frozen=True)
class EulerAngles:
    """ZYZ Euler angles relating Alice's frame to Bob's.

    Canonical ranges: phi, psi in [0, 2*pi), theta in [0, pi].
    """

    phi: float
    theta: float
    psi: float

    def __post_init__(self):
        for name, v in (("phi", self.phi), ("theta", self.theta), ("psi", self.psi)):
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if not (0.0 <= self.phi < TWO_PI and 0.0 <= self.psi < TWO_PI):
            raise ValueError("phi and psi must lie in [0, 2*pi)")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError("theta must lie in [0, pi]")

    @classmethod
    def canonical(cls, phi, theta, psi):
        """Wrap arbitrary finite angles into the canonical ranges."""
        theta = float(theta) % TWO_PI
        phi, psi = float(phi), float(psi)
        if theta > np.pi:
            # Ry(2*pi - t) = Rz(pi) Ry(t) Rz(pi) up to global phase
            theta = TWO_PI - theta
            phi += np.pi
            psi += np.pi
        return cls(wrap_angle(phi), theta, wrap_angle(psi))

    def as_tuple(self):
        return (self.phi, self.theta, self.psi)


IDENTITY_FRAME = EulerAngles(0.0, 0.0, 0.0)


def random_frame(rng):
    """Haar-uniform rotation: uniform phi, psi and uniform cos(theta)."""
    u = rng.random(3)
    return EulerAngles(TWO_PI * float(u[0]),
                       float(np.arccos(1.0 - 2.0 * u[1])),
                       TWO_PI * float(u[2]))


def unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector has no direction")
    return v / n


@dataclass(frozen=True)
class AxisPair:
    """Bob's probe/measurement axis paired with Alice's rotation axis."""

    bob_axis: np.ndarray
    alice_axis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bob_axis", unit(self.bob_axis))
        object.__setattr__(self, "alice_axis", unit(self.alice_axis))


Z_PAIR = AxisPair(AXIS_Z, AXIS_Z)


@dataclass(frozen=True)
class FractionT:
    """T = theta / pi in [0, 1], with dyadic bit access T = 0.t1 t2 ..."""

    value: float

    def __post_init__(self):
        if not (np.isfinite(self.value) and -1e-12 <= self.value <= 1.0 + 1e-12):
            raise ValueError("T must lie in [0, 1]")
        object.__setattr__(self, "value", float(min(max(self.value, 0.0), 1.0)))

    @property
    def theta(self):
        return np.pi * self.value

    def bits(self, k):
        """First k binary digits of T (exact: floats are binary)."""
        out = []
        rem = self.value
        for _ in range(k):
            rem *= 2.0
            bit = 1 if rem >= 1.0 else 0
            rem -= bit
            out.append(bit)
        return out

    def remainder(self, k):
        """Residual r with T = sum(bits) * 2^-i + r * 2^-k, r in [0, 1]."""
        rem = self.value
        for _ in range(k):
            rem *= 2.0
            rem -= int(rem >= 1.0)
        return rem


def t_from_theta(theta):
    """T fraction of a polar angle theta in [0, pi]."""
    if not 0.0 <= theta <= np.pi:
        raise ValueError("theta must lie in [0, pi]")
    return FractionT(theta / np.pi)


def so3_matrix(angles):
    """SO(3) matrix M of the frame rotation (ZYZ, same convention as SU(2))."""
    phi, theta, psi = angles.phi, angles.theta, angles.psi

    def mz(a):
        c, s = np.cos(a), np.sin(a)
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])

    def my(a):
        c, s = np.cos(a), np.sin(a)
        return np.array([[c, 0, s], [0, 1.0, 0], [-s, 0, c]])

    return mz(psi) @ my(theta) @ mz(phi)


def axis_in_bob_frame(angles, alice_axis):
    """An Alice-frame axis expressed in Bob's coordinates: M^-1 a."""
    return so3_matrix(angles).T @ unit(alice_axis)


def overlap(pair, angles):
    """cos of the angle between Bob's axis and Alice's axis, in Bob's frame."""
    return float(pair.bob_axis @ axis_in_bob_frame(angles, pair.alice_axis))


def fidelity(n_a, n_e):
    """Direction-estimation fidelity (1 + cos angle) / 2."""
    return 0.5 * (1.0 + float(unit(n_a) @ unit(n_e)))


_GIMBAL_TOL = 1e-9


def euler_from_columns(col_z, col_x):
    """Recover ZYZ Euler angles from the images of z and x in Bob's frame.

    col_z and col_x are estimates of M^-1 z and M^-1 x. The x column is
    projected off the z column, the third column completes a right-handed
    triad, and the canonical angles are read off M = (M^-1)^T with atan2.
    Raises DegenerateInput when the columns are too far from orthogonal
    (|dot| > 0.2) to orthonormalize meaningfully.
    """
    cz = unit(col_z)
    cx = np.asarray(col_x, dtype=float)
    if abs(unit(cx) @ cz) > 0.2:
        raise DegenerateInput("column estimates are nearly parallel")
    cx = unit(cx - (cx @ cz) * cz)
    cy = np.cross(cz, cx)
    m = np.stack([cx, cy, cz], axis=1).T  # M = (M^-1)^T
    cos_t = float(np.clip(m[2, 2], -1.0, 1.0))
    theta = float(np.arccos(cos_t))
    if abs(cos_t) >= 1.0 - _GIMBAL_TOL:
        # gimbal: fold the whole z-rotation into phi, set psi = 0
        if cos_t > 0:
            phi = float(np.arctan2(m[1, 0], m[0, 0]))
        else:
            phi = float(np.arctan2(m[0, 1], -m[0, 0]))
        return EulerAngles(wrap_angle(phi), theta, 0.0)
    psi = float(np.arctan2(m[1, 2], m[0, 2]))
    phi = float(np.arctan2(m[2, 1], -m[2, 0]))
    return EulerAngles(wrap_angle(phi), theta, wrap_angle(psi))


@dataclass(frozen=True)
class IntervalEstimate:
    """Point estimate with the nominal k-bit half-width 2^-(k+1)."""

    center: float
    half_width: float
    k: int
    epsilon: float

    def __post_init__(self):
        if abs(self.half_width - 2.0 ** -(self.k + 1)) > 1e-15:
            raise ValueError("half-width must equal 2^-(k+1)")
