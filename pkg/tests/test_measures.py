import numpy as np
import pytest

from chancap.capacities import CapacityCurve, ChannelFamily, capacity_curve
from chancap.channels import AMPLITUDE_DAMPING, DEPHASING, DephasingSnapshot
from chancap.capacities import coherent_information
from chancap.dynamics import (
    AmplitudeDynamics,
    DephasingDynamics,
    LorentzianSpectrum,
    OhmicSpectrum,
)
from chancap.grids import TimeGrid
from chancap.measures import (
    additivity_NQ_dephasing,
    divisibility_witness,
    lsf_lower_bound,
    measure_NC,
    measure_NQ,
    positive_variation,
)

AD_GRID = TimeGrid(2.0, 4001)
OHMIC_GRID = TimeGrid(20.0, 2001)


def make_curve(values, t_max=1.0):
    values = np.asarray(values, dtype=float)
    grid = TimeGrid(t_max, values.size)
    return CapacityCurve(
        grid=grid, times=grid.times(), values=values, which="Q", kind=DEPHASING
    )


def lorentzian_family(R, delta=0.0):
    spec = LorentzianSpectrum(gamma_M=R, lam=1.0, delta=delta)
    return ChannelFamily(AMPLITUDE_DAMPING, AmplitudeDynamics.lorentzian(spec))


def ohmic_family(s, gamma_M=0.1):
    return ChannelFamily(DEPHASING, DephasingDynamics.ohmic(OhmicSpectrum(s=s, gamma_M=gamma_M)))


class TestPositiveVariation:
    def test_monotone_decreasing_is_markovian(self):
        report = positive_variation(make_curve(np.linspace(1.0, 0.0, 50)))
        assert report.value == 0.0
        assert report.intervals == ()

    def test_sums_positive_increments(self):
        report = positive_variation(make_curve([1.0, 0.4, 0.7, 0.6, 0.9], t_max=4.0))
        assert report.value == pytest.approx(0.6, abs=1e-15)
        assert report.intervals == ((1.0, 2.0), (3.0, 4.0))

    def test_tie_tolerance(self):
        report = positive_variation(make_curve([0.5, 0.5 + 1e-13, 0.5]))
        assert report.value == 0.0

    def test_shift_invariance(self, rng):
        values = rng.uniform(0.0, 1.0, size=100)
        base = positive_variation(make_curve(values)).value
        shifted = positive_variation(make_curve(values + 0.37)).value
        assert shifted == pytest.approx(base, abs=1e-12)

    def test_needs_two_nodes(self):
        # TimeGrid refuses n < 2 up front; a degenerate curve is refused too
        grid = TimeGrid(1.0, 2)
        bad = CapacityCurve(
            grid=grid, times=np.array([0.0]), values=np.array([1.0]), which="Q", kind=DEPHASING
        )
        with pytest.raises(ValueError):
            positive_variation(bad)


class TestCapacityMeasures:
    def test_dephasing_measures_coincide(self):
        family = ohmic_family(3.0)
        nq = measure_NQ(family, OHMIC_GRID)
        nc = measure_NC(family, OHMIC_GRID)
        assert nc.value == pytest.approx(nq.value, abs=1e-12)
        assert nq.value > 1e-3
        assert nq.converged

    def test_ohmic_s3_matches_analytic_variation(self):
        # single descent to Gamma_max = Gamma(sqrt(3)), single ascent to the
        # plateau: N_Q = Q(Gamma_inf) - Q(Gamma_max), both in closed form
        from chancap.capacities import q_dephasing

        gamma_max = 0.1 * (1.0 - (1.0 - 3.0) / 16.0)
        expected = q_dephasing(0.1).value - q_dephasing(gamma_max).value
        got = measure_NQ(ohmic_family(3.0), OHMIC_GRID)
        assert got.value == pytest.approx(expected, abs=5e-4)

    def test_divisible_spectra_give_zero(self):
        for s in (1.0, 1.5, 2.0):
            assert measure_NQ(ohmic_family(s), OHMIC_GRID).value == 0.0

    def test_measure_intervals_cover_revival(self):
        report = measure_NQ(ohmic_family(3.0), OHMIC_GRID)
        assert len(report.intervals) == 1
        lo, hi = report.intervals[0]
        assert lo == pytest.approx(np.sqrt(3.0), abs=0.05)

    def test_intervals_ordered_and_inside_horizon(self):
        report = measure_NC(lorentzian_family(100.0), AD_GRID)
        assert len(report.intervals) >= 2
        flat = [t for pair in report.intervals for t in pair]
        assert flat == sorted(flat)  # ordered and non-overlapping
        assert 0.0 <= flat[0] and flat[-1] <= report.grid.t_max

    def test_ad_strong_coupling_split(self):
        # R=10: assisted capacity revives, quantum capacity does not
        family = lorentzian_family(10.0)
        assert measure_NQ(family, AD_GRID).value == 0.0
        nc = measure_NC(family, AD_GRID)
        assert nc.value > 0.1

    def test_ad_very_strong_coupling_quantum_revival(self):
        family = lorentzian_family(100.0)
        report = measure_NQ(family, AD_GRID)
        assert report.value > 0.1
        assert report.converged

    def test_threshold_scan_brackets_crossover(self):
        values = {}
        for R in (30.0, 35.0, 40.0, 43.0, 46.0, 50.0, 60.0, 100.0):
            values[R] = measure_NQ(lorentzian_family(R), AD_GRID).value
        assert values[30.0] == values[35.0] == values[40.0] == 0.0
        assert values[43.0] > 0.0
        lined = [values[R] for R in (43.0, 46.0, 50.0, 60.0, 100.0)]
        assert all(a < b for a, b in zip(lined, lined[1:]))


class TestAdditivity:
    def test_single_copy_identity(self):
        dyn = DephasingDynamics.ohmic(OhmicSpectrum(s=3.0, gamma_M=0.1))
        single = measure_NQ(ChannelFamily(DEPHASING, dyn), OHMIC_GRID).value
        assert additivity_NQ_dephasing(dyn, OHMIC_GRID, 1) == single

    def test_two_copies_exactly_double(self):
        dyn = DephasingDynamics.ohmic(OhmicSpectrum(s=3.0, gamma_M=0.1))
        single = additivity_NQ_dephasing(dyn, OHMIC_GRID, 1)
        assert additivity_NQ_dephasing(dyn, OHMIC_GRID, 2) == 2.0 * single

    def test_divisible_case_stays_zero(self):
        dyn = DephasingDynamics.ohmic(OhmicSpectrum(s=1.0, gamma_M=0.1))
        assert additivity_NQ_dephasing(dyn, OHMIC_GRID, 5) == 0.0

    def test_rejects_nonpositive_copies(self):
        dyn = DephasingDynamics.markovian(1.0)
        with pytest.raises(ValueError):
            additivity_NQ_dephasing(dyn, OHMIC_GRID, 0)


class TestDivisibilityWitness:
    def test_markovian_dephasing_empty(self):
        report = divisibility_witness(DephasingDynamics.markovian(1.0), TimeGrid(5.0, 101))
        assert report.negative_intervals == ()

    def test_ohmic_s3_nonempty_and_overlaps_revival(self):
        dyn = DephasingDynamics.ohmic(OhmicSpectrum(s=3.0, gamma_M=0.1))
        witness = divisibility_witness(dyn, OHMIC_GRID)
        assert witness.negative_intervals
        measure = measure_NQ(ChannelFamily(DEPHASING, dyn), OHMIC_GRID)
        w_lo, w_hi = witness.negative_intervals[0]
        m_lo, m_hi = measure.intervals[0]
        assert max(w_lo, m_lo) < min(w_hi, m_hi)  # overlapping windows

    def test_weak_coupling_ad_empty(self):
        report = divisibility_witness(
            AmplitudeDynamics.lorentzian(LorentzianSpectrum(gamma_M=0.2)), TimeGrid(10.0, 2001)
        )
        assert report.negative_intervals == ()

    def test_strong_coupling_ad_nonempty(self):
        report = divisibility_witness(
            AmplitudeDynamics.lorentzian(LorentzianSpectrum(gamma_M=10.0)), AD_GRID
        )
        assert report.negative_intervals

    def test_amplitude_zero_reported_as_gap(self):
        dyn = AmplitudeDynamics(
            "test", lambda grid: (1.0 - grid.times() / grid.t_max).astype(complex)
        )
        report = divisibility_witness(dyn, TimeGrid(1.0, 11))
        assert report.unsampled_intervals  # the final node has G = 0

    def test_iff_criterion_across_ohmic_sweep(self):
        for s in (1.0, 1.5, 2.0, 2.5, 3.0):
            dyn = DephasingDynamics.ohmic(OhmicSpectrum(s=s, gamma_M=0.1))
            grid = TimeGrid(20.0, 1001)
            revival = measure_NQ(ChannelFamily(DEPHASING, dyn), grid).value > 1e-9
            witness = divisibility_witness(dyn, grid)
            assert revival == bool(witness.negative_intervals)


class TestLsfLowerBound:
    def test_static_amplitude_gives_zero(self):
        dyn = AmplitudeDynamics("test", lambda grid: np.ones(grid.n, dtype=complex))
        family = ChannelFamily(AMPLITUDE_DAMPING, dyn)
        assert lsf_lower_bound(family, TimeGrid(1.0, 51)).value == 0.0

    def test_maximally_entangled_probe_equals_capacity_route(self):
        # at theta = pi/4 the probe's mutual information is
        # 1 + I_c(maximally mixed input), so the single-angle bound equals
        # the positive variation of that coherent-information curve
        family = ohmic_family(3.0)
        bound = lsf_lower_bound(family, TimeGrid(20.0, 801), theta_samples=1)
        # the report may have auto-extended its horizon; compare on its grid
        exponents = family.dynamics.exponent_curve(bound.grid.times())
        ic = np.array(
            [
                coherent_information(
                    DEPHASING, DephasingSnapshot(g), np.eye(2, dtype=complex) / 2.0
                )
                for g in exponents
            ]
        )
        d = np.diff(ic)
        expected = float(np.sum(d[d > 1e-12]))
        assert bound.value == pytest.approx(expected, abs=1e-9)

    def test_detects_backflow_where_quantum_capacity_is_blind(self):
        family = lorentzian_family(10.0)
        assert measure_NQ(family, AD_GRID).value == 0.0
        bound = lsf_lower_bound(family, AD_GRID)
        assert bound.value > 0.1

    def test_bound_below_assisted_measure(self):
        # the Schmidt-family bound cannot exceed the full C_ea measure
        family = lorentzian_family(10.0)
        bound = lsf_lower_bound(family, AD_GRID).value
        nc = measure_NC(family, AD_GRID).value
        assert bound <= nc + 1e-9

    def test_theta_validation(self):
        with pytest.raises(ValueError):
            lsf_lower_bound(lorentzian_family(10.0), AD_GRID, theta_samples=0)


class TestGridStability:
    @pytest.mark.parametrize(
        "family_fn,grid",
        [
            (lambda: ohmic_family(3.0), OHMIC_GRID),
            (lambda: lorentzian_family(10.0), AD_GRID),
            (lambda: lorentzian_family(100.0), AD_GRID),
        ],
    )
    def test_half_step_stability(self, family_fn, grid):
        family = family_fn()
        for measure in (measure_NQ, measure_NC):
            report = measure(family, grid)
            fine = measure(family, report.grid.refined()).value
            if report.value == 0.0:
                assert fine == 0.0
            else:
                assert abs(fine - report.value) < 1e-3 * max(fine, report.value)
