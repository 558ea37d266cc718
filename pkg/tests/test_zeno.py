import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urlab import zeno
from urlab.errors import InvalidParam, InvalidSchedule
from urlab.hilbert import basis_state, pauli_x, pauli_z, random_hermitian, random_state
from urlab.zeno import ZenoSchedule

H = pauli_x()
KET0 = basis_state(2, 0)


class TestAmplitude:
    def test_zero_time(self):
        assert zeno.survival_amplitude(random_hermitian(3, 1), random_state(3, 2), 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("t", [0.1, 1.0, 2.7])
    def test_cosine(self, t):
        assert zeno.survival_amplitude(H, KET0, t) == pytest.approx(math.cos(t), abs=1e-14)

    def test_stationary_state(self):
        a = zeno.survival_amplitude(pauli_z(), KET0, 0.9)
        assert a == pytest.approx(np.exp(-0.9j), abs=1e-14)
        assert abs(a) == pytest.approx(1.0, abs=1e-14)


class TestProbability:
    def test_single_instant(self):
        run = zeno.survival_probability(H, KET0, ZenoSchedule((0.1,)))
        assert run.probability == pytest.approx(math.cos(0.1) ** 2, abs=1e-14)
        assert run.probability == pytest.approx(0.990033, abs=1e-6)

    def test_ten_steps(self):
        run = zeno.survival_probability(H, KET0, ZenoSchedule.equal(1.0, 10))
        assert run.probability == pytest.approx(math.cos(0.1) ** 20, abs=1e-13)
        assert run.probability == pytest.approx(0.9047, abs=1e-4)
        assert len(run.per_step_amplitudes) == 10

    def test_eigenvector(self):
        run = zeno.survival_probability(pauli_z(), KET0, ZenoSchedule((0.3, 1.0, 4.0)))
        assert run.probability == pytest.approx(1.0, abs=1e-14)

    def test_uneven_schedule(self):
        run = zeno.survival_probability(H, KET0, ZenoSchedule((0.2, 0.5, 0.6), t0=0.1))
        expected = (math.cos(0.1) * math.cos(0.3) * math.cos(0.1)) ** 2
        assert run.probability == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("instants, t0", [((), 0.0), ((0.0,), 0.0), ((0.2, 0.1), 0.0), ((0.5,), 1.0)])
    def test_invalid_schedule(self, instants, t0):
        with pytest.raises(InvalidSchedule):
            ZenoSchedule(instants, t0)

    def test_equal_interval_small_n(self):
        one = zeno.equal_interval_probability(H, KET0, 0.4, 1)
        assert one.probability == pytest.approx(abs(zeno.survival_amplitude(H, KET0, 0.4)) ** 2)
        run = zeno.equal_interval_probability(H, KET0, 1.0, 100)
        assert run.probability == pytest.approx(math.cos(0.01) ** 200, abs=1e-12)
        assert run.probability == pytest.approx(0.99005, abs=1e-5)

    def test_doubling_n_increases_survival(self):
        p100 = zeno.equal_interval_probability(H, KET0, 1.0, 100).probability
        p200 = zeno.equal_interval_probability(H, KET0, 1.0, 200).probability
        assert p200 > p100

    @pytest.mark.parametrize("t, n", [(0.0, 3), (1.0, 0), (-1.0, 2)])
    def test_invalid_params(self, t, n):
        with pytest.raises(InvalidParam):
            zeno.equal_interval_probability(H, KET0, t, n)


@settings(max_examples=40, deadline=None)
@given(
    dim=st.integers(2, 6),
    seed=st.integers(0, 2**32 - 1),
    total=st.floats(0.05, 5.0),
    n=st.integers(1, 40),
)
def test_product_and_power_forms_agree(dim, seed, total, n):
    Hr, psi = random_hermitian(dim, seed), random_state(dim, seed + 1)
    prod = zeno.survival_probability(Hr, psi, ZenoSchedule.equal(total, n))
    power = zeno.equal_interval_probability(Hr, psi, total, n)
    assert prod.probability == pytest.approx(power.probability, abs=1e-12)
    assert 0.0 <= prod.probability <= 1.0 + 1e-10
    assert all(abs(a) <= 1 + 1e-12 for a in prod.per_step_amplitudes)


class TestShortTime:
    def test_fixture_values(self):
        c = zeno.short_time_check(H, KET0, 0.1)
        assert c.exact == pytest.approx(math.cos(0.1) ** 2, abs=1e-15)
        assert c.expansion == pytest.approx(0.99, abs=1e-15)
        # cos^2 x = 1 - x^2 + x^4/3 - ...
        assert c.residual == pytest.approx(0.1**4 / 3, rel=0.02)
        half = zeno.short_time_check(H, KET0, 0.05)
        assert half.residual == pytest.approx(2.1e-6, rel=0.02)
        assert 12 <= c.residual / half.residual <= 20

    def test_eigenvector(self):
        c = zeno.short_time_check(pauli_z(), KET0, 0.3)
        assert c.exact == pytest.approx(1.0, abs=1e-15)
        assert c.expansion == 1.0

    def test_quartic_law_random(self):
        Hr, psi = random_hermitian(4, 3), random_state(4, 4)
        rows = zeno.quartic_law(Hr, psi, 0.02, halvings=4)
        assert all(r[2] is None or 12 <= r[2] <= 20 for r in rows)

    def test_invalid_dt(self):
        with pytest.raises(InvalidParam):
            zeno.short_time_check(H, KET0, 0.0)


class TestCondition:
    def test_conflict(self):
        c = zeno.zeno_condition(H, KET0, 0.01)
        assert c.parameter == pytest.approx(1e-4)
        assert c.satisfied
        assert c.heisenberg_conflict
        assert c.heisenberg_product == pytest.approx(0.01)

    def test_large_step(self):
        c = zeno.zeno_condition(H, KET0, 2.0)
        assert c.parameter == pytest.approx(4.0)
        assert not c.satisfied
        assert not c.heisenberg_conflict

    def test_eigenvector(self):
        for dt in (0.01, 1.0, 100.0):
            assert zeno.zeno_condition(pauli_z(), KET0, dt).parameter == 0.0

    def test_hbar(self):
        c = zeno.zeno_condition(H, KET0, 0.01, hbar=0.001)
        assert c.parameter == pytest.approx(100.0)
        assert not c.satisfied


class TestConvergence:
    def test_fixture(self):
        scan = zeno.convergence_scan(H, KET0, 1.0, [10, 100, 1000])
        losses = [r.loss for r in scan.rows]
        # 1 - cos(1/n)^(2n) ~ 1/n
        for n, loss in zip((10, 100, 1000), losses):
            assert loss == pytest.approx(1 - math.cos(1 / n) ** (2 * n), abs=1e-12)
        assert losses[0] == pytest.approx(0.095, abs=5e-4)
        assert losses[1] == pytest.approx(0.00995, abs=5e-6)
        assert losses[2] == pytest.approx(0.000999, abs=1e-6)
        assert scan.fitted_constant == pytest.approx(1.0, rel=0.01)

    def test_many_measurements(self):
        p = zeno.equal_interval_probability(H, KET0, 1.0, 10_000).probability
        assert p >= 0.9999

    def test_eigenvector_never_decays(self):
        scan = zeno.convergence_scan(pauli_z(), KET0, 1.0, [10, 100, 1000])
        assert all(r.probability == pytest.approx(1.0, abs=1e-14) for r in scan.rows)

    def test_rejects_unsorted(self):
        with pytest.raises(InvalidParam):
            zeno.convergence_scan(H, KET0, 1.0, [100, 10])

    def test_limit_law(self):
        n = 10_000
        p = zeno.equal_interval_probability(H, KET0, 1.0, n).probability
        assert n * (1 - p) == pytest.approx(1.0, rel=0.02)
