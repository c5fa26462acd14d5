import numpy as np
import pytest

from chancap.capacities import (
    ChannelFamily,
    capacity_curve,
    cea_ad,
    cea_ad_curve,
    cea_dephasing,
    coherent_information,
    entropy_exchange_via_purification,
    mutual_information,
    q_ad,
    q_ad_curve,
    q_dephasing,
)
from chancap.channels import (
    AMPLITUDE_DAMPING,
    ADSnapshot,
    DEPHASING,
    DephasingSnapshot,
    ad_complementary,
    ad_kraus,
    apply_channel,
    channel_kraus,
    complementary_channel,
    dephasing_complementary,
    dephasing_kraus,
)
from chancap.dynamics import (
    AmplitudeDynamics,
    DephasingDynamics,
    LorentzianSpectrum,
    OhmicSpectrum,
)
from chancap.grids import TimeGrid
from chancap.qmath import apply_operators, binary_entropy, von_neumann_entropy
from conftest import random_density

MIXED = np.eye(2, dtype=complex) / 2.0


def h2(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0) & (x < 1)
    xi = x[inside]
    out[inside] = -(xi * np.log2(xi) + (1 - xi) * np.log2(1 - xi))
    return out if out.ndim else float(out)


def dense_grid_oracle(g2, assisted, step=1e-5):
    """Brute-force maximisation over the input excitation, step 1e-5."""
    p = np.arange(0.0, 1.0 + step, step)
    vals = h2(g2 * p) - h2((1 - g2) * p)
    if assisted:
        vals = vals + h2(p)
    k = int(np.argmax(vals))
    return float(vals[k]), float(p[k])


class TestDephasingCapacity:
    def test_noiseless(self):
        assert q_dephasing(0.0).value == pytest.approx(1.0, abs=1e-14)
        assert cea_dephasing(0.0).value == pytest.approx(2.0, abs=1e-14)

    def test_fully_dephased(self):
        assert q_dephasing(50.0).value == pytest.approx(0.0, abs=1e-12)
        assert cea_dephasing(50.0).value == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_value(self):
        expected = 1.0 - binary_entropy(0.5 * (1.0 + np.exp(-0.2)))
        got = q_dephasing(0.1)
        assert got.value == pytest.approx(expected, abs=1e-15)
        assert got.value == pytest.approx(0.5614, abs=1e-4)
        assert got.optimizer_p is None

    def test_assisted_identity(self, rng):
        for exponent in rng.uniform(0.0, 10.0, size=100):
            assert abs(
                cea_dephasing(exponent).value - 1.0 - q_dephasing(exponent).value
            ) < 1e-12

    def test_range(self, rng):
        for exponent in rng.uniform(0.0, 10.0, size=50):
            assert 0.0 <= q_dephasing(exponent).value <= 1.0


class TestADCapacity:
    def test_identity_channel(self):
        got = q_ad(1.0)
        assert got.value == pytest.approx(1.0, abs=1e-9)
        assert got.optimizer_p == pytest.approx(0.5, abs=1e-6)
        got = cea_ad(1.0)
        assert got.value == pytest.approx(2.0, abs=1e-9)
        assert got.optimizer_p == pytest.approx(0.5, abs=1e-6)

    def test_non_degradable_region_is_zero(self):
        assert q_ad(0.5).value == 0.0
        assert q_ad(0.5).optimizer_p == 0.0
        assert q_ad(0.2).value == 0.0

    def test_constant_channel_transmits_nothing(self):
        assert cea_ad(0.0).value == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("g2", [0.6, 0.75, 0.9, 1.0])
    def test_against_dense_grid_oracle(self, g2):
        want, p_want = dense_grid_oracle(g2, assisted=False)
        got = q_ad(g2)
        assert got.value == pytest.approx(want, abs=1e-6)
        if g2 < 1.0:
            assert got.optimizer_p == pytest.approx(p_want, abs=1e-3)
        want, _ = dense_grid_oracle(g2, assisted=True)
        assert cea_ad(g2).value == pytest.approx(want, abs=1e-6)

    def test_known_values_at_three_quarters(self):
        got = q_ad(0.75)
        assert got.value == pytest.approx(0.415, abs=5e-4)
        assert got.optimizer_p == pytest.approx(0.445, abs=1e-3)

    def test_continuity_at_threshold(self):
        assert q_ad(0.5 + 1e-6).value < 1e-5

    def test_limits(self):
        assert q_ad(1.0 - 1e-9).value == pytest.approx(1.0, abs=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            q_ad(1.5)
        with pytest.raises(ValueError):
            cea_ad(-0.1)

    def test_assisted_dominates(self, rng):
        g2 = rng.uniform(0.0, 1.0, size=40)
        q_vals, _ = q_ad_curve(g2)
        c_vals, _ = cea_ad_curve(g2)
        assert np.all(c_vals >= q_vals - 1e-12)


class TestEntropyRoutes:
    def test_identity_coherent_information(self, rng):
        rho = random_density(rng)
        got = coherent_information(DEPHASING, DephasingSnapshot(0.0), rho)
        assert got == pytest.approx(von_neumann_entropy(rho), abs=1e-10)

    def test_dephasing_entropy_oracle(self):
        # max over diagonal inputs of I_c equals 1 - H2((1+e^{-Gamma})/2),
        # the capacity 1 - H2(p) of a phase flip with p = (1-e^{-Gamma})/2;
        # the closed-form q_dephasing is parameterised with the doubled
        # exponent, so the routes meet at half the snapshot exponent.
        for exponent in (0.05, 0.1, 0.5, 1.0, 3.0):
            snap = DephasingSnapshot(exponent)
            qs = np.linspace(0.0, 1.0, 101)
            best = max(
                coherent_information(DEPHASING, snap, np.diag([q, 1.0 - q]))
                for q in qs
            )
            direct = 1.0 - binary_entropy(0.5 * (1.0 + np.exp(-exponent)))
            assert best == pytest.approx(direct, abs=1e-6)
            assert best == pytest.approx(q_dephasing(0.5 * exponent).value, abs=1e-6)

    def test_ad_bloch_diagonal_oracle_matches_grid_opt(self):
        # entropy route through the complementary channel, refined around
        # the coarse argmax, must agree with the direct optimisation
        for g2 in (0.6, 0.75, 0.9):
            snap = ADSnapshot(np.sqrt(g2))

            def ic(p):
                return coherent_information(
                    AMPLITUDE_DAMPING, snap, np.diag([1.0 - p, p])
                )

            ps = np.linspace(0.0, 1.0, 201)
            k = int(np.argmax([ic(p) for p in ps]))
            from scipy.optimize import minimize_scalar

            res = minimize_scalar(
                lambda p: -ic(p),
                bounds=(ps[max(k - 1, 0)], ps[min(k + 1, 200)]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            assert -res.fun == pytest.approx(q_ad(g2).value, abs=1e-6)

    def test_coherent_information_at_oracle_p(self):
        got = q_ad(0.75)
        snap = ADSnapshot(np.sqrt(0.75))
        rho = np.diag([1.0 - got.optimizer_p, got.optimizer_p])
        assert coherent_information(AMPLITUDE_DAMPING, snap, rho) == pytest.approx(
            got.value, abs=1e-6
        )

    def test_mutual_information_identity(self):
        assert mutual_information(DEPHASING, DephasingSnapshot(0.0), MIXED) == pytest.approx(
            2.0, abs=1e-10
        )

    def test_mutual_information_fully_dephased(self):
        got = mutual_information(DEPHASING, DephasingSnapshot(60.0), MIXED)
        assert got == pytest.approx(1.0, abs=1e-9)

    def test_mutual_minus_coherent_is_input_entropy(self, rng):
        for _ in range(20):
            rho = random_density(rng)
            snap = ADSnapshot(np.sqrt(rng.uniform()))
            diff = mutual_information(AMPLITUDE_DAMPING, snap, rho) - coherent_information(
                AMPLITUDE_DAMPING, snap, rho
            )
            assert diff == pytest.approx(von_neumann_entropy(rho), abs=1e-10)


class TestEntropyExchange:
    def test_identity_channel_stays_pure(self, rng):
        kraus = dephasing_kraus(DephasingSnapshot(0.0))
        for _ in range(5):
            got = entropy_exchange_via_purification(kraus, random_density(rng))
            assert got == pytest.approx(0.0, abs=1e-9)

    def test_matches_complementary_route_dephasing(self):
        snap = DephasingSnapshot(np.log(2.0))
        got = entropy_exchange_via_purification(dephasing_kraus(snap), MIXED)
        want = von_neumann_entropy(dephasing_complementary(snap, MIXED))
        assert got == pytest.approx(want, abs=1e-10)

    def test_matches_complementary_route_fuzzed(self, rng):
        for _ in range(200):
            rho = random_density(rng)
            deph = DephasingSnapshot(rng.uniform(0.0, 4.0))
            got = entropy_exchange_via_purification(dephasing_kraus(deph), rho)
            want = von_neumann_entropy(dephasing_complementary(deph, rho))
            assert abs(got - want) < 1e-8
            ad = ADSnapshot(rng.uniform() * np.exp(2j * np.pi * rng.uniform()))
            got = entropy_exchange_via_purification(ad_kraus(ad), rho)
            want = von_neumann_entropy(ad_complementary(ad, rho))
            assert abs(got - want) < 1e-8


class TestTwoCopyAdditivity:
    def test_product_input_coherent_information_doubles(self):
        # degradable smoke test at Gamma = 0.1 through the 4x4 entropy path
        snap = DephasingSnapshot(0.1)
        rho = MIXED
        single = coherent_information(DEPHASING, snap, rho)
        kraus = dephasing_kraus(snap).operators
        two_copy_ops = [np.kron(a, b) for a in kraus for b in kraus]
        joint_out = apply_operators(two_copy_ops, np.kron(rho, rho))
        env = dephasing_complementary(snap, rho).matrix
        two_copy = von_neumann_entropy(joint_out) - von_neumann_entropy(np.kron(env, env))
        assert two_copy == pytest.approx(2.0 * single, abs=1e-9)


class TestCapacityCurves:
    def test_markovian_dephasing_strictly_decreasing(self):
        family = ChannelFamily(DEPHASING, DephasingDynamics.markovian(1.0))
        curve = capacity_curve(family, TimeGrid(5.0, 401), "Q")
        assert np.all(np.diff(curve.values) < 0.0)

    def test_ohmic_dip_and_recovery(self):
        family = ChannelFamily(
            DEPHASING, DephasingDynamics.ohmic(OhmicSpectrum(s=3.0, gamma_M=0.1))
        )
        curve = capacity_curve(family, TimeGrid(20.0, 801), "Q")
        k_min = int(np.argmin(curve.values))
        assert 0 < k_min < curve.values.size - 1
        assert curve.values[-1] > curve.values[k_min] + 1e-3
        assert curve.values[-1] > 0.5  # residual capacity

    def test_lorentzian_revival_after_dead_window(self):
        spec = LorentzianSpectrum(gamma_M=1.0 / 0.06, delta=5.0)
        family = ChannelFamily(AMPLITUDE_DAMPING, AmplitudeDynamics.lorentzian(spec))
        curve = capacity_curve(family, TimeGrid(2.0, 2001), "Q")
        dead = curve.values == 0.0
        revived = dead[:-1] & (curve.values[1:] > 0.0)
        assert dead.any() and revived.any()

    def test_assisted_dominates_pointwise(self):
        spec = LorentzianSpectrum(gamma_M=10.0)
        family = ChannelFamily(AMPLITUDE_DAMPING, AmplitudeDynamics.lorentzian(spec))
        grid = TimeGrid(2.0, 501)
        q = capacity_curve(family, grid, "Q").values
        c = capacity_curve(family, grid, "C_ea").values
        assert np.all(c >= q - 1e-12)

    def test_kind_dynamics_mismatch_rejected(self):
        with pytest.raises(ValueError, match="requires"):
            ChannelFamily(DEPHASING, AmplitudeDynamics.markovian(1.0))

    def test_unknown_quantity_rejected(self):
        family = ChannelFamily(DEPHASING, DephasingDynamics.markovian(1.0))
        with pytest.raises(ValueError, match="which"):
            capacity_curve(family, TimeGrid(1.0, 11), "X")
