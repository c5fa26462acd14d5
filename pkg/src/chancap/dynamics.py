"""Scalar decoherence functions that parameterise the channels.

Dephasing is driven by the exponent Gamma(t) and rate gamma(t) of a bosonic
reservoir at zero temperature,

    Gamma(t) = int_0^oo J(w) (1 - cos w t) / w^2 dw,
    gamma(t) = int_0^oo J(w) sin(w t) / w dw,

with the Ohmic-family spectral density J(w) = gamma_M (w/w_c)^s e^{-w/w_c}.
Amplitude damping is driven by the complex excited-state amplitude G(t),
either in closed form (Lorentzian reservoir, Markovian limit) or as the
solution of the non-local equation

    G'(t) = - int_0^t f(t - t') G(t') dt',   G(0) = 1,

solved by second-order product integration (a weight-adjusted rule absorbs
an inverse-square-root kernel singularity analytically).
"""

import heapq
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gamma as _gamma_fn

from chancap.errors import NumericalError, StepSizeError
from chancap.grids import TimeGrid

#: absolute tolerance of the reservoir-integral quadrature
QUAD_TOL = 1e-10
#: spectral integrals are truncated at this multiple of the cutoff; the
#: exponential tail beyond it is below 1e-12 for every supported s
OMEGA_MAX_FACTOR = 40.0

_AMPLITUDE_SLACK = 1e-8  # |G| may exceed 1 by at most this much


# ---------------------------------------------------------------------------
# reservoir models


@dataclass(frozen=True)
class OhmicSpectrum:
    """Ohmic-family spectral density: J(w) = gamma_M (w/w_c)^s e^{-w/w_c}.

    Times are measured in units of 1/omega_c.
    """

    s: float
    gamma_M: float
    omega_c: float = 1.0

    def __post_init__(self):
        if not self.s > 0.0:
            raise ValueError(f"Ohmicity parameter must be > 0, got {self.s}")
        if not self.gamma_M > 0.0:
            raise ValueError(f"coupling gamma_M must be > 0, got {self.gamma_M}")
        if not self.omega_c > 0.0:
            raise ValueError(f"cutoff omega_c must be > 0, got {self.omega_c}")


@dataclass(frozen=True)
class LorentzianSpectrum:
    """Lorentzian reservoir of width ``lam``; ``delta`` is the qubit-cavity
    detuning in units of ``lam``.  The coupling ratio R = gamma_M / lam."""

    gamma_M: float
    lam: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not self.gamma_M > 0.0:
            raise ValueError(f"gamma_M must be > 0, got {self.gamma_M}")
        if not self.lam > 0.0:
            raise ValueError(f"lam must be > 0, got {self.lam}")

    @property
    def R(self) -> float:
        return self.gamma_M / self.lam


@dataclass(frozen=True)
class BandGapModel:
    """Isotropic photonic band-edge reservoir.

    ``beta`` sets the time unit 1/beta; ``delta_e`` is the detuning of the
    qubit from the band-edge frequency in units of beta (negative inside
    the gap).
    """

    delta_e: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.beta > 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta}")


@dataclass(frozen=True)
class MemoryKernel:
    """Reservoir correlation function f(tau) for the non-local G equation.

    ``singular`` marks an inverse-square-root divergence at tau = 0, in
    which case f(tau) * sqrt(tau) must stay bounded as tau -> 0+.
    """

    evaluate: Callable
    singular: bool = False


def lorentzian_kernel(spec: LorentzianSpectrum) -> MemoryKernel:
    """Exponential correlation function of the Lorentzian reservoir."""
    rate = 0.5 * spec.gamma_M * spec.lam
    pole = 1j * spec.delta * spec.lam - spec.lam
    return MemoryKernel(lambda tau: rate * np.exp(pole * tau), singular=False)


def bandgap_kernel(model: BandGapModel) -> MemoryKernel:
    """Band-edge correlation function, inverse-sqrt singular at tau = 0.

    f(tau) = beta^{3/2} exp(i (delta tau - pi/4)) / sqrt(pi tau) with
    delta = delta_e * beta.  The -pi/4 phase is fixed by the square-root
    density of states above the edge and puts the population-trapping
    regime at negative detunings.
    """
    amp = model.beta ** 1.5 * np.exp(-0.25j * np.pi) / np.sqrt(np.pi)
    delta = model.delta_e * model.beta

    def f(tau):
        return amp * np.exp(1j * delta * tau) / np.sqrt(tau)

    return MemoryKernel(f, singular=True)


# ---------------------------------------------------------------------------
# adaptive panel quadrature (vectorised over the whole time grid)

_GL_LO = np.polynomial.legendre.leggauss(8)
_GL_HI = np.polynomial.legendre.leggauss(16)


def _panel_estimate(fvals, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    v_lo = fvals(mid + half * _GL_LO[0])
    v_hi = fvals(mid + half * _GL_HI[0])
    i_lo = half * (_GL_LO[1] @ v_lo)
    i_hi = half * (_GL_HI[1] @ v_hi)
    return i_hi, float(np.max(np.abs(i_hi - i_lo), initial=0.0))


def _adaptive_integral(fvals, a, b, tol=QUAD_TOL, initial_panels=16, max_panels=20000):
    """Integrate a vector-valued integrand by adaptive Gauss panels.

    ``fvals(w)`` maps an array of nodes (m,) to values (m, k); the result
    is the (k,) vector of integrals.  Panels are bisected worst-first (by
    the nested low/high order error estimate, maximised over the k
    components) until the summed estimate drops below ``tol``.
    """
    edges = np.linspace(a, b, initial_panels + 1)
    heap = []
    total_err = 0.0
    seq = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _panel_estimate(fvals, lo, hi)
        heapq.heappush(heap, (-err, seq, lo, hi, val))
        total_err += err
        seq += 1
    while total_err > tol:
        if len(heap) >= max_panels:
            raise NumericalError(
                f"quadrature did not reach tol={tol} within {max_panels} panels "
                f"(error estimate {total_err:.3e})"
            )
        neg_err, _, lo, hi, _ = heapq.heappop(heap)
        total_err += neg_err  # neg_err = -err of the removed panel
        mid = 0.5 * (lo + hi)
        for sub in ((lo, mid), (mid, hi)):
            val, err = _panel_estimate(fvals, *sub)
            heapq.heappush(heap, (-err, seq, sub[0], sub[1], val))
            total_err += err
            seq += 1
    return sum(item[4] for item in heap)


# ---------------------------------------------------------------------------
# dephasing: Ohmic-family exponent and rate


def _oscillation_panels(b: float, times: np.ndarray) -> int:
    # roughly one starting panel per two oscillation periods of the integrand
    tmax = float(np.max(times, initial=0.0))
    return int(np.clip(b * tmax / (4.0 * np.pi), 16, 2048))


def ohmic_Gamma_curve(spec: OhmicSpectrum, times) -> np.ndarray:
    """Dephasing exponent Gamma(t) on an array of times (adaptive quadrature).

    The integrand J(w)(1 - cos wt)/w^2 is regular at w = 0 for every s > 0
    (written as 2 sin^2(wt/2) to avoid cancellation), so finite-time values
    exist for the whole Ohmic family; only the t -> oo plateau needs s > 1.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0.0):
        raise ValueError("times must be >= 0")
    pref = spec.gamma_M / spec.omega_c ** spec.s
    tcol = times[None, :]

    def fvals(w):
        wcol = w[:, None]
        envelope = pref * wcol ** (spec.s - 2.0) * np.exp(-wcol / spec.omega_c)
        return envelope * 2.0 * np.sin(0.5 * wcol * tcol) ** 2

    b = OMEGA_MAX_FACTOR * spec.omega_c
    out = _adaptive_integral(fvals, 0.0, b, initial_panels=_oscillation_panels(b, times))
    out[times == 0.0] = 0.0
    return out


def ohmic_gamma_rate_curve(spec: OhmicSpectrum, times) -> np.ndarray:
    """Dephasing rate gamma(t) = dGamma/dt on an array of times."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0.0):
        raise ValueError("times must be >= 0")
    pref = spec.gamma_M / spec.omega_c ** spec.s
    tcol = times[None, :]

    def fvals(w):
        wcol = w[:, None]
        envelope = pref * wcol ** (spec.s - 1.0) * np.exp(-wcol / spec.omega_c)
        return envelope * np.sin(wcol * tcol)

    b = OMEGA_MAX_FACTOR * spec.omega_c
    out = _adaptive_integral(fvals, 0.0, b, initial_panels=_oscillation_panels(b, times))
    out[times == 0.0] = 0.0
    return out


def ohmic_Gamma(spec: OhmicSpectrum, t: float) -> float:
    if t < 0.0:
        raise ValueError("t must be >= 0")
    return float(ohmic_Gamma_curve(spec, [t])[0])


def ohmic_gamma_rate(spec: OhmicSpectrum, t: float) -> float:
    if t < 0.0:
        raise ValueError("t must be >= 0")
    return float(ohmic_gamma_rate_curve(spec, [t])[0])


def ohmic_Gamma_infinity(spec: OhmicSpectrum) -> float:
    """Long-time plateau of Gamma: (gamma_M / omega_c) GammaFn(s - 1).

    Diverges (infrared) for s <= 1, where no plateau exists.
    """
    if spec.s <= 1.0:
        raise ValueError(
            f"the dephasing exponent has no finite plateau for s <= 1 (got s={spec.s})"
        )
    return spec.gamma_M / spec.omega_c * float(_gamma_fn(spec.s - 1.0))


def markovian_Gamma(gamma_M: float, t) -> float | np.ndarray:
    """Markovian dephasing exponent gamma_M * t."""
    if gamma_M <= 0.0:
        raise ValueError("gamma_M must be > 0")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be >= 0")
    out = gamma_M * t
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# amplitude damping: closed-form amplitudes


def lorentzian_G(spec: LorentzianSpectrum, t) -> complex | np.ndarray:
    """Excited-state amplitude for the Lorentzian reservoir.

    G(t) = e^{-(lam - i d) t / 2} [cosh(W t/2) + (lam - i d)/W sinh(W t/2)]
    with d = delta * lam and W = sqrt(lam^2 - 2 i d lam - (2 gamma_M lam + d^2)),
    principal branch.  On resonance this reduces to the sqrt(1 - 2R) form;
    the W -> 0 degeneracy is replaced by its analytic limit.
    """
    t = np.asarray(t, dtype=float)
    lam, d = spec.lam, spec.delta * spec.lam
    omega = np.sqrt(complex(lam * lam - 2.0 * spec.gamma_M * lam - d * d, -2.0 * d * lam))
    decay = np.exp(-0.5 * (lam - 1j * d) * t)
    z = 0.5 * omega * t
    small = np.abs(z) < 1e-6
    if np.all(small):
        body = 1.0 + 0.5 * (lam - 1j * d) * t + 0.5 * z * z
    else:
        with np.errstate(over="ignore", invalid="ignore"):
            body = np.cosh(z) + (lam - 1j * d) / omega * np.sinh(z) if omega != 0 else 0.0
        if np.any(small):
            body = np.where(small, 1.0 + 0.5 * (lam - 1j * d) * t + 0.5 * z * z, body)
    out = decay * body
    return complex(out) if out.ndim == 0 else out


def markovian_G(gamma_M: float, t) -> float | np.ndarray:
    """Markovian amplitude e^{-gamma_M t / 2} (so |G|^2 = e^{-gamma_M t})."""
    if gamma_M <= 0.0:
        raise ValueError("gamma_M must be > 0")
    t = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * gamma_M * t)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Volterra memory-kernel solver


def _kernel_values(kernel: MemoryKernel, taus: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(kernel.evaluate(taus), dtype=complex)
        if vals.shape == taus.shape:
            return vals
    except Exception:
        pass
    return np.array([kernel.evaluate(x) for x in taus], dtype=complex)


def volterra_solve(kernel: MemoryKernel, grid: TimeGrid) -> np.ndarray:
    """Solve G'(t) = -int_0^t f(t-u) G(u) du, G(0)=1, on a uniform grid.

    Second-order scheme: the convolution is discretised by product
    integration of a piecewise-linear interpolant (plain trapezoid weights
    for regular kernels; for inverse-sqrt kernels the smooth part
    g(tau) = f(tau) sqrt(tau) is interpolated and the 1/sqrt(tau) weight
    integrated analytically per panel), and the resulting derivative is
    stepped with the trapezoidal rule.  The implicit last-node coupling is
    linear in G and solved in closed form.

    Raises ``StepSizeError`` if |G| exceeds 1.5 anywhere, the signature of
    an unstable step size.
    """
    n, h = grid.n, grid.step
    sigma = np.arange(n) * h
    if kernel.singular:
        s_right = sigma + h
        m0 = 2.0 * (np.sqrt(s_right) - np.sqrt(sigma))
        m1 = (2.0 / 3.0) * (s_right ** 1.5 - sigma ** 1.5) - sigma * m0
        a_left = m0 - m1 / h
        a_right = m1 / h
        c = np.empty(n, dtype=complex)
        eps = h * 1e-8  # g(0) from the bounded limit of f(tau) sqrt(tau)
        c[0] = kernel.evaluate(eps) * np.sqrt(eps)
        c[1:] = _kernel_values(kernel, sigma[1:]) * np.sqrt(sigma[1:])
    else:
        a_left = np.full(n, 0.5 * h)
        a_right = np.full(n, 0.5 * h)
        c = _kernel_values(kernel, sigma)

    # node weight of index k in the length-m convolution: a_right[k-1] + a_left[k]
    w_interior = a_left.copy()
    w_interior[1:] += a_right[:-1]
    wc = w_interior * c

    G = np.empty(n, dtype=complex)
    dG = np.empty(n, dtype=complex)
    G[0], dG[0] = 1.0, 0.0
    alpha0 = a_left[0] * c[0]
    for m in range(n - 1):
        if m >= 1:
            rest = np.dot(wc[1:m + 1], G[m:0:-1]) + a_right[m] * c[m + 1] * G[0]
        else:
            rest = a_right[0] * c[1] * G[0]
        nxt = (G[m] + 0.5 * h * (dG[m] - rest)) / (1.0 + 0.5 * h * alpha0)
        if abs(nxt) > 1.5:
            raise StepSizeError(
                f"|G| = {abs(nxt):.3f} at t = {sigma[m + 1]:.6g}; reduce the grid step"
            )
        G[m + 1] = nxt
        dG[m + 1] = -(alpha0 * nxt + rest)
    return G


def bandgap_G(model: BandGapModel, grid: TimeGrid) -> np.ndarray:
    """Amplitude in the band-edge reservoir (Volterra-solved)."""
    return volterra_solve(bandgap_kernel(model), grid)


# ---------------------------------------------------------------------------
# rate extraction


@dataclass(frozen=True)
class RateSamples:
    """Decay rate and Lamb shift extracted from sampled G(t).

    ``gaps`` flags nodes where |G| fell below the division threshold; the
    rates there are NaN placeholders, not values.
    """

    times: np.ndarray
    decay_rate: np.ndarray
    lamb_shift: np.ndarray
    gaps: np.ndarray


def rates_from_G(times, G) -> RateSamples:
    """gamma(t) = -2 Re(G'/G), s(t) = -2 Im(G'/G) by centered differences.

    Endpoints use second-order one-sided stencils.  Nodes with
    |G| <= 1e-12 are flagged as gaps instead of producing values.
    """
    times = np.asarray(times, dtype=float)
    G = np.asarray(G, dtype=complex)
    if times.shape != G.shape or times.size < 3:
        raise ValueError("need matching arrays of at least 3 samples")
    h = times[1] - times[0]
    if not np.allclose(np.diff(times), h, rtol=0.0, atol=1e-9 * abs(h)):
        raise ValueError("times must be uniformly spaced")
    dG = np.empty_like(G)
    dG[1:-1] = (G[2:] - G[:-2]) / (2.0 * h)
    dG[0] = (-3.0 * G[0] + 4.0 * G[1] - G[2]) / (2.0 * h)
    dG[-1] = (3.0 * G[-1] - 4.0 * G[-2] + G[-3]) / (2.0 * h)
    gaps = np.abs(G) <= 1e-12
    ratio = np.empty_like(G)
    ratio[~gaps] = dG[~gaps] / G[~gaps]
    ratio[gaps] = np.nan
    return RateSamples(
        times=times,
        decay_rate=-2.0 * np.real(ratio),
        lamb_shift=-2.0 * np.imag(ratio),
        gaps=gaps,
    )


# ---------------------------------------------------------------------------
# dynamics facades consumed by channels / capacities / the CLI


class DephasingDynamics:
    """Evaluator bundle for the dephasing exponent and rate."""

    def __init__(self, source: str, exponent_fn, rate_fn):
        self.source = source
        self._exponent_fn = exponent_fn
        self._rate_fn = rate_fn

    @classmethod
    def ohmic(cls, spec: OhmicSpectrum) -> "DephasingDynamics":
        return cls(
            "ohmic",
            lambda ts: ohmic_Gamma_curve(spec, ts),
            lambda ts: ohmic_gamma_rate_curve(spec, ts),
        )

    @classmethod
    def markovian(cls, gamma_M: float) -> "DephasingDynamics":
        if gamma_M <= 0.0:
            raise ValueError("gamma_M must be > 0")
        return cls(
            "markovian",
            lambda ts: gamma_M * np.asarray(ts, dtype=float),
            lambda ts: np.full(np.asarray(ts).shape, gamma_M, dtype=float),
        )

    @classmethod
    def tabulated(cls, times, exponents) -> "DephasingDynamics":
        times = np.asarray(times, dtype=float)
        exponents = np.asarray(exponents, dtype=float)
        if times.ndim != 1 or times.shape != exponents.shape or times.size < 2:
            raise ValueError("need matching 1-d arrays of at least 2 samples")
        if times[0] != 0.0 or exponents[0] != 0.0:
            raise ValueError("tabulated exponent must start at Gamma(0) = 0")
        if np.any(exponents < 0.0):
            raise ValueError("tabulated exponent must be >= 0 everywhere")
        rate_tab = np.gradient(exponents, times)
        return cls(
            "tabulated",
            lambda ts: np.interp(ts, times, exponents),
            lambda ts: np.interp(ts, times, rate_tab),
        )

    def exponent_curve(self, times) -> np.ndarray:
        out = np.asarray(self._exponent_fn(np.asarray(times, dtype=float)), dtype=float)
        if np.any(out < -1e-12):
            raise NumericalError("dephasing exponent went negative; map not CP")
        return np.clip(out, 0.0, None)

    def rate_curve(self, times) -> np.ndarray:
        return np.asarray(self._rate_fn(np.asarray(times, dtype=float)), dtype=float)

    def exponent(self, t: float) -> float:
        return float(self.exponent_curve(np.array([t]))[0])

    def rate(self, t: float) -> float:
        return float(self.rate_curve(np.array([t]))[0])


class AmplitudeDynamics:
    """Evaluator bundle for the amplitude-damping G(t).

    Closed-form sources (lorentzian, markovian) evaluate pointwise; the
    Volterra-backed sources (bandgap, volterra) solve on the requested grid.
    """

    def __init__(self, source: str, sample_fn, amplitude_fn=None):
        self.source = source
        self._sample_fn = sample_fn
        self._amplitude_fn = amplitude_fn

    @classmethod
    def lorentzian(cls, spec: LorentzianSpectrum) -> "AmplitudeDynamics":
        return cls(
            "lorentzian",
            lambda grid: np.asarray(lorentzian_G(spec, grid.times()), dtype=complex),
            lambda t: lorentzian_G(spec, t),
        )

    @classmethod
    def markovian(cls, gamma_M: float) -> "AmplitudeDynamics":
        if gamma_M <= 0.0:
            raise ValueError("gamma_M must be > 0")
        return cls(
            "markovian",
            lambda grid: np.asarray(markovian_G(gamma_M, grid.times()), dtype=complex),
            lambda t: complex(markovian_G(gamma_M, t)),
        )

    @classmethod
    def bandgap(cls, model: BandGapModel) -> "AmplitudeDynamics":
        return cls("bandgap", lambda grid: bandgap_G(model, grid))

    @classmethod
    def from_kernel(cls, kernel: MemoryKernel) -> "AmplitudeDynamics":
        return cls("volterra", lambda grid: volterra_solve(kernel, grid))

    def sample(self, grid: TimeGrid) -> np.ndarray:
        G = np.asarray(self._sample_fn(grid), dtype=complex)
        peak = float(np.max(np.abs(G)))
        if peak > 1.0 + _AMPLITUDE_SLACK:
            raise NumericalError(f"|G| reached {peak}; amplitude must stay <= 1")
        return G

    def amplitude(self, t: float) -> complex:
        if self._amplitude_fn is None:
            raise NumericalError(
                f"{self.source} dynamics has no pointwise amplitude; sample a grid"
            )
        return complex(self._amplitude_fn(t))
