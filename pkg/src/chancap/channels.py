"""Fixed-time snapshots of the dephasing and amplitude damping channels.

A snapshot decouples the channel algebra from time: all time dependence
enters through the dephasing exponent Gamma(t) or the amplitude G(t)
supplied by :mod:`chancap.dynamics`, so the maps here can be tested on
exact scalar inputs.
"""

from dataclasses import dataclass

import numpy as np

from chancap.qmath import DensityMatrix, KrausSet, _state_matrix

DEPHASING = "dephasing"
AMPLITUDE_DAMPING = "amplitude_damping"
CHANNEL_KINDS = (DEPHASING, AMPLITUDE_DAMPING)

_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class DephasingSnapshot:
    """Dephasing channel at a fixed time, parameterised by the exponent."""

    exponent: float  # Gamma >= 0; off-diagonals are damped by e^{-Gamma}

    def __post_init__(self):
        if not self.exponent >= 0.0:
            raise ValueError(
                f"exponent must be >= 0 for a completely positive map, got {self.exponent}"
            )

    @property
    def coherence_factor(self) -> float:
        return float(np.exp(-self.exponent))


@dataclass(frozen=True)
class ADSnapshot:
    """Amplitude damping channel at a fixed time, parameterised by G."""

    amplitude: complex  # |G| <= 1

    def __post_init__(self):
        if abs(self.amplitude) > 1.0 + 1e-8:
            raise ValueError(f"|G| must be <= 1, got {abs(self.amplitude)}")

    @property
    def g2(self) -> float:
        return min(abs(self.amplitude) ** 2, 1.0)


def dephasing_apply(snap: DephasingSnapshot, rho) -> DensityMatrix:
    """Populations preserved, coherences multiplied by e^{-Gamma}."""
    m = _state_matrix(rho).copy()
    e = snap.coherence_factor
    m[0, 1] *= e
    m[1, 0] *= e
    return DensityMatrix(m)


def dephasing_kraus(snap: DephasingSnapshot) -> KrausSet:
    """K1 = sqrt((1+e^{-Gamma})/2) I, K2 = sqrt((1-e^{-Gamma})/2) sigma_z."""
    e = snap.coherence_factor
    k1 = np.sqrt(0.5 * (1.0 + e)) * np.eye(2, dtype=complex)
    k2 = np.sqrt(0.5 * (1.0 - e)) * _SIGMA_Z
    return KrausSet([k1, k2])


def dephasing_complementary(snap: DephasingSnapshot, rho) -> DensityMatrix:
    """Environment state: diag (1 +- e^{-Gamma})/2 with a coherence set by
    the population imbalance Tr(rho sigma_z); independent of the input
    coherences."""
    m = _state_matrix(rho)
    e = snap.coherence_factor
    bias = float(np.real(m[0, 0] - m[1, 1]))
    off = 0.5 * np.sqrt(max(1.0 - e * e, 0.0)) * bias
    env = np.array(
        [[0.5 * (1.0 + e), off], [off, 0.5 * (1.0 - e)]], dtype=complex
    )
    return DensityMatrix(env)


def ad_apply(snap: ADSnapshot, rho) -> DensityMatrix:
    """Excited population damped by |G|^2, coherence rotated/damped by G."""
    m = _state_matrix(rho)
    g = complex(snap.amplitude)
    g2 = snap.g2
    out = np.array(
        [
            [1.0 - g2 * m[1, 1], g * m[0, 1]],
            [np.conj(g) * m[1, 0], g2 * m[1, 1]],
        ],
        dtype=complex,
    )
    return DensityMatrix(out)


def ad_kraus(snap: ADSnapshot) -> KrausSet:
    """K1 = diag(1, G*), K2 = sqrt(1-|G|^2) |1><2|.

    The conjugate in K1 makes the operator-sum route reproduce
    ``ad_apply`` exactly (rho_12 -> G rho_12) for complex amplitudes; for
    real G it is the familiar diag(1, G).
    """
    g = complex(snap.amplitude)
    k1 = np.diag([1.0, np.conj(g)]).astype(complex)
    k2 = np.zeros((2, 2), dtype=complex)
    k2[0, 1] = np.sqrt(max(1.0 - snap.g2, 0.0))
    return KrausSet([k1, k2])


def ad_complementary(snap: ADSnapshot, rho) -> DensityMatrix:
    """Environment state after amplitude damping: the lost excitation
    (1-|G|^2) rho_22 appears in the environment's excited population."""
    m = _state_matrix(rho)
    loss = 1.0 - snap.g2
    p_exc = loss * float(np.real(m[1, 1]))
    off = np.sqrt(max(loss, 0.0)) * m[0, 1]
    env = np.array(
        [[1.0 - p_exc, off], [np.conj(off), p_exc]], dtype=complex
    )
    return DensityMatrix(env)


def is_degradable(kind: str, snap) -> bool:
    """Dephasing is degradable for every admissible exponent; amplitude
    damping only while |G|^2 > 1/2 (the boundary itself is excluded, with
    a one-ulp slack so that amplitudes built from sqrt(1/2) land on it)."""
    if kind == DEPHASING:
        return True
    if kind == AMPLITUDE_DAMPING:
        return snap.g2 > 0.5 + 1e-15
    raise ValueError(f"unknown channel kind {kind!r}")


def apply_channel(kind: str, snap, rho) -> DensityMatrix:
    if kind == DEPHASING:
        return dephasing_apply(snap, rho)
    if kind == AMPLITUDE_DAMPING:
        return ad_apply(snap, rho)
    raise ValueError(f"unknown channel kind {kind!r}")


def complementary_channel(kind: str, snap, rho) -> DensityMatrix:
    if kind == DEPHASING:
        return dephasing_complementary(snap, rho)
    if kind == AMPLITUDE_DAMPING:
        return ad_complementary(snap, rho)
    raise ValueError(f"unknown channel kind {kind!r}")


def channel_kraus(kind: str, snap) -> KrausSet:
    if kind == DEPHASING:
        return dephasing_kraus(snap)
    if kind == AMPLITUDE_DAMPING:
        return ad_kraus(snap)
    raise ValueError(f"unknown channel kind {kind!r}")
