"""Quantum and entanglement-assisted capacities of the channel snapshots.

Closed forms / one-parameter maximisations:

    dephasing:  Q = 1 - H2((1 + e^{-2 Gamma}) / 2),   C_ea = 1 + Q
    amplitude damping (|G|^2 = g2 > 1/2):
        Q    = max_p [ H2(g2 p) - H2((1-g2) p) ]
        C_ea = max_p [ H2(p) + H2(g2 p) - H2((1-g2) p) ]
    (Q = 0 for g2 <= 1/2, where the channel is not degradable.)

The entropy-route functions (coherent/mutual information, entropy
exchange) recompute the same quantities through the complementary channel
and purification, and serve as independent cross checks in the test
suite.
"""

from dataclasses import dataclass

import numpy as np

from chancap import channels
from chancap.dynamics import AmplitudeDynamics, DephasingDynamics
from chancap.grids import TimeGrid
from chancap.qmath import (
    KrausSet,
    apply_operators,
    binary_entropy,
    binary_entropy_arr,
    entropy_from_eigenvalues,
    purify,
    von_neumann_entropy,
)

CLOSED_FORM = "closed_form"
GRID_OPT = "grid_opt"
ORACLE = "oracle"

_COARSE_POINTS = 2001
_GOLDEN_ITERATIONS = 40  # shrinks the 1e-3 coarse bracket below 1e-10
_INVPHI = 0.5 * (np.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class CapacityValue:
    """A capacity in bits plus the optimising input excitation, if any."""

    value: float
    optimizer_p: float | None
    method: str


@dataclass(frozen=True)
class ChannelFamily:
    """A channel kind together with the dynamics that drives it in time."""

    kind: str
    dynamics: DephasingDynamics | AmplitudeDynamics

    def __post_init__(self):
        if self.kind not in channels.CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        want = DephasingDynamics if self.kind == channels.DEPHASING else AmplitudeDynamics
        if not isinstance(self.dynamics, want):
            raise ValueError(f"{self.kind} requires {want.__name__}")


@dataclass(frozen=True)
class CapacityCurve:
    """A capacity sampled on a uniform time grid."""

    grid: TimeGrid
    times: np.ndarray
    values: np.ndarray
    which: str  # "Q" or "C_ea"
    kind: str


# ---------------------------------------------------------------------------
# dephasing closed forms


def q_dephasing(exponent: float) -> CapacityValue:
    """Quantum capacity of the dephasing snapshot (exact closed form).

    The optimal input is the maximally mixed state for every exponent, so
    there is no optimisation parameter to report.
    """
    if exponent < 0.0:
        raise ValueError("exponent must be >= 0")
    value = 1.0 - binary_entropy(0.5 * (1.0 + np.exp(-2.0 * exponent)))
    return CapacityValue(value=max(value, 0.0), optimizer_p=None, method=CLOSED_FORM)


def cea_dephasing(exponent: float) -> CapacityValue:
    """Entanglement-assisted capacity: exactly 1 + Q for dephasing."""
    q = q_dephasing(exponent)
    return CapacityValue(value=1.0 + q.value, optimizer_p=None, method=CLOSED_FORM)


def _q_dephasing_curve(exponents: np.ndarray) -> np.ndarray:
    return 1.0 - binary_entropy_arr(0.5 * (1.0 + np.exp(-2.0 * exponents)))


# ---------------------------------------------------------------------------
# amplitude damping: maximisation over the input excitation p


def _ad_objective(g2, p, assisted):
    val = binary_entropy_arr(g2 * p) - binary_entropy_arr((1.0 - g2) * p)
    if assisted:
        val = val + binary_entropy_arr(p)
    return val


def _maximise_over_p(g2: np.ndarray, assisted: bool):
    """Coarse grid + vectorised golden-section refinement, per node."""
    g2 = np.asarray(g2, dtype=float)
    pgrid = np.linspace(0.0, 1.0, _COARSE_POINTS)
    best = np.full(g2.shape, -np.inf)
    best_idx = np.zeros(g2.shape, dtype=int)
    for i, p in enumerate(pgrid):
        val = _ad_objective(g2, p, assisted)
        better = val > best
        best = np.where(better, val, best)
        best_idx = np.where(better, i, best_idx)
    lo = pgrid[np.maximum(best_idx - 1, 0)]
    hi = pgrid[np.minimum(best_idx + 1, _COARSE_POINTS - 1)]
    for _ in range(_GOLDEN_ITERATIONS):
        c = hi - _INVPHI * (hi - lo)
        d = lo + _INVPHI * (hi - lo)
        keep_upper = _ad_objective(g2, c, assisted) < _ad_objective(g2, d, assisted)
        lo = np.where(keep_upper, c, lo)
        hi = np.where(keep_upper, hi, d)
    p_opt = 0.5 * (lo + hi)
    return np.maximum(_ad_objective(g2, p_opt, assisted), 0.0), p_opt


def q_ad_curve(g2: np.ndarray):
    """Vectorised Q^A over an array of |G|^2 values; returns (values, p)."""
    g2 = np.asarray(g2, dtype=float)
    values, p_opt = _maximise_over_p(g2, assisted=False)
    blocked = g2 <= 0.5  # non-degradable: zero quantum capacity, boundary included
    return np.where(blocked, 0.0, values), np.where(blocked, 0.0, p_opt)


def cea_ad_curve(g2: np.ndarray):
    """Vectorised C_ea^A over an array of |G|^2 values; returns (values, p)."""
    return _maximise_over_p(np.asarray(g2, dtype=float), assisted=True)


def q_ad(g2: float) -> CapacityValue:
    """Quantum capacity of the amplitude damping snapshot."""
    if not 0.0 <= g2 <= 1.0:
        raise ValueError(f"|G|^2 must lie in [0, 1], got {g2}")
    if g2 <= 0.5:
        return CapacityValue(value=0.0, optimizer_p=0.0, method=CLOSED_FORM)
    values, popt = q_ad_curve(np.array([g2]))
    return CapacityValue(value=float(values[0]), optimizer_p=float(popt[0]), method=GRID_OPT)


def cea_ad(g2: float) -> CapacityValue:
    """Entanglement-assisted capacity of the amplitude damping snapshot."""
    if not 0.0 <= g2 <= 1.0:
        raise ValueError(f"|G|^2 must lie in [0, 1], got {g2}")
    values, popt = cea_ad_curve(np.array([g2]))
    return CapacityValue(value=float(values[0]), optimizer_p=float(popt[0]), method=GRID_OPT)


# ---------------------------------------------------------------------------
# entropy-route quantities (independent cross checks)


def coherent_information(kind: str, snap, rho) -> float:
    """I_c = S(channel output) - S(complementary output); may be negative."""
    out = channels.apply_channel(kind, snap, rho)
    env = channels.complementary_channel(kind, snap, rho)
    return von_neumann_entropy(out) - von_neumann_entropy(env)


def mutual_information(kind: str, snap, rho) -> float:
    """I = S(rho) + I_c(rho); the entanglement-assisted objective."""
    return von_neumann_entropy(rho) + coherent_information(kind, snap, rho)


def entropy_exchange_via_purification(kraus: KrausSet, rho) -> float:
    """Entropy exchange computed through an explicit purification.

    ``rho`` is purified onto the first tensor factor, the channel acts on
    that factor (identity on the purifying one), and the entropy of the
    joint output is returned.  By purification independence this must
    coincide with the entropy of the complementary-channel output.
    """
    pure = purify(rho)
    eye = np.eye(2, dtype=complex)
    extended = [np.kron(k, eye) for k in kraus.operators]
    joint = apply_operators(extended, pure.matrix)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(joint))


# ---------------------------------------------------------------------------
# capacity curves


def capacity_curve(family: ChannelFamily, grid: TimeGrid, which: str) -> CapacityCurve:
    """Sample Q or C_ea along the family's time evolution.

    Each node is optimised independently (no continuation of the optimal
    input across time), so the curve is exact per node.
    """
    if which not in ("Q", "C_ea"):
        raise ValueError(f"which must be 'Q' or 'C_ea', got {which!r}")
    times = grid.times()
    if family.kind == channels.DEPHASING:
        exponents = family.dynamics.exponent_curve(times)
        q = _q_dephasing_curve(exponents)
        values = q if which == "Q" else 1.0 + q
    else:
        G = family.dynamics.sample(grid)
        g2 = np.clip(np.abs(G) ** 2, 0.0, 1.0)
        values = (q_ad_curve if which == "Q" else cea_ad_curve)(g2)[0]
    return CapacityCurve(grid=grid, times=times, values=values, which=which, kind=family.kind)


def g2_curve(family: ChannelFamily, grid: TimeGrid) -> np.ndarray:
    """|G(t)|^2 samples for an amplitude damping family."""
    if family.kind != channels.AMPLITUDE_DAMPING:
        raise ValueError("g2_curve applies to amplitude damping families only")
    G = family.dynamics.sample(grid)
    return np.clip(np.abs(G) ** 2, 0.0, 1.0)
