import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from urlab import bw
from urlab.bw import BWParams
from urlab.errors import InvalidParams, QuadratureNoConvergence, ScheduleTooShort

DEFAULT = BWParams(E0=1.0, Gamma0=0.1, Emin=0.0)
SCHEDULE = bw.doubling_schedule(1e3, 1e6)


def lorentz_mass(p, a, b):
    """Closed-form probability in [a, b] (both above Emin)."""
    return p.N / math.pi * (math.atan((b - p.E0) / p.half_width) - math.atan((a - p.E0) / p.half_width))


class TestNormalization:
    def test_threshold_at_peak(self):
        assert bw.normalization(1.0, 0.1, 1.0) == pytest.approx(2.0, abs=1e-15)

    def test_half_width_offset(self):
        assert bw.normalization(1.0, 0.2, 0.9) == pytest.approx(4 / 3, abs=1e-12)

    def test_far_threshold(self):
        assert bw.normalization(0.0, 1.0, -1e12) == pytest.approx(1.0, abs=1e-11)

    def test_default_value(self):
        # pi / (pi/2 + arctan 20)
        assert DEFAULT.N == pytest.approx(1.0161592, abs=1e-7)

    @pytest.mark.parametrize("args", [(1.0, 0.0, 0.0), (1.0, -1.0, 0.0), (math.nan, 1.0, 0.0), (1.0, 1.0, -math.inf)])
    def test_invalid(self, args):
        with pytest.raises(InvalidParams):
            bw.normalization(*args)

    def test_wrong_explicit_n(self):
        BWParams(1.0, 0.1, 0.0, N=DEFAULT.N)
        with pytest.raises(InvalidParams):
            BWParams(1.0, 0.1, 0.0, N=1.0)


class TestDensity:
    def test_peak(self):
        assert bw.bw_density(DEFAULT, 1.0) == pytest.approx(DEFAULT.N / (2 * math.pi) * 4 / 0.1, rel=1e-14)

    def test_below_threshold(self):
        assert bw.bw_density(DEFAULT, -0.5) == 0.0
        assert bw.bw_density(DEFAULT, 0.0) > 0.0

    def test_vectorized_nonnegative(self):
        E = np.linspace(-5, 50, 1001)
        d = bw.bw_density(DEFAULT, E)
        assert d.shape == E.shape
        assert np.all(d >= 0)

    def test_tail_law(self):
        E = 1e7
        assert E**2 * bw.bw_density(DEFAULT, E) == pytest.approx(DEFAULT.tail_coefficient, rel=1e-6)


class TestMoments:
    def test_mass(self):
        assert bw.quadrature_mass(DEFAULT) == pytest.approx(1.0, abs=1e-8)

    @settings(max_examples=25, deadline=None)
    @given(
        E0=st.floats(-10, 10),
        gamma=st.floats(1e-3, 5),
        offset=st.floats(0, 50),
    )
    def test_mass_property(self, E0, gamma, offset):
        p = BWParams(E0, gamma, E0 - offset)
        assert bw.quadrature_mass(p) == pytest.approx(1.0, abs=1e-8)

    def test_zeroth_moment_matches_arctan(self):
        for L in (0.5, 1.0, 1.3, 100.0):
            assert bw.truncated_moment(DEFAULT, 0, L) == pytest.approx(lorentz_mass(DEFAULT, 0.0, L), rel=1e-9)

    @pytest.mark.parametrize("half", [0.05, 0.3, 0.9])
    def test_symmetric_window(self, half):
        p = BWParams(1.0, 0.1, 1.0 - half)
        first = bw.truncated_moment(p, 1, 1.0 + half)
        mass = bw.truncated_moment(p, 0, 1.0 + half)
        assert first == pytest.approx(1.0 * mass, rel=1e-9)

    def test_monotone_in_cutoff(self):
        for k in (0, 1, 2):
            vals = [bw.truncated_moment(DEFAULT, k, L) for L in (0.5, 1.0, 2.0, 10.0, 1e3, 1e5)]
            assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_second_moment_closed_form(self):
        # E^2 w = (N Gamma0 / 2pi) [1 + (2 E0 E - E0^2 - hw^2) / ((E-E0)^2 + hw^2)]
        p, L = DEFAULT, 50.0
        c, hw = p.tail_coefficient, p.half_width
        u = lambda E: (E - p.E0) / hw  # noqa: E731
        atan_part = (math.atan(u(L)) - math.atan(u(0.0))) / hw
        log_part = math.log(((L - p.E0) ** 2 + hw**2) / (p.E0**2 + hw**2))
        expected = c * (L + p.E0 * log_part + (p.E0**2 - hw**2) * atan_part)
        assert bw.truncated_moment(p, 2, L) == pytest.approx(expected, rel=1e-9)

    def test_bad_arguments(self):
        with pytest.raises(InvalidParams):
            bw.truncated_moment(DEFAULT, 3, 10.0)
        with pytest.raises(InvalidParams):
            bw.truncated_moment(DEFAULT, 1, -1.0)

    def test_quadrature_failure_is_reported(self, monkeypatch):
        def failing_quad(*args, **kwargs):
            warnings.warn("maximum number of subdivisions", integrate.IntegrationWarning)
            return 0.0, 1.0

        monkeypatch.setattr(bw.integrate, "quad", failing_quad)
        with pytest.raises(QuadratureNoConvergence):
            bw.truncated_moment(DEFAULT, 1, 10.0)


class TestDivergence:
    def test_default_schedule(self):
        rep = bw.divergence_scan(DEFAULT, SCHEDULE)
        c = DEFAULT.tail_coefficient
        assert rep.increments[1][-1] == pytest.approx(c * math.log(2), rel=0.02)
        assert rep.k1_coefficient == pytest.approx(c, rel=0.02)
        assert rep.k2_ratio == pytest.approx(2.0, abs=0.05)
        assert rep.k2_slope == pytest.approx(c, rel=0.02)
        assert rep.total_mass == pytest.approx(1.0, abs=1e-8)
        assert rep.first_moment_diverges and rep.second_moment_diverges
        assert rep.conclusion == "Delta_H undefined"

    def test_zeroth_increments_vanish(self):
        rep = bw.divergence_scan(DEFAULT, SCHEDULE)
        inc0 = rep.increments[0]
        assert all(b < a for a, b in zip(inc0, inc0[1:]))
        assert inc0[-1] < 1e-7
        assert rep.moments[0][-1] == pytest.approx(1.0, abs=1e-6)

    def test_increments_agree_with_closed_form(self):
        rep = bw.divergence_scan(DEFAULT, SCHEDULE)
        for (a, b), inc in zip(zip(SCHEDULE, SCHEDULE[1:]), rep.increments[0]):
            assert inc == pytest.approx(lorentz_mass(DEFAULT, a, b), rel=1e-8)

    def test_too_short(self):
        with pytest.raises(ScheduleTooShort):
            bw.divergence_scan(DEFAULT, [1e3, 2e3, 4e3, 8e3, 1.6e4])

    def test_not_doubling(self):
        with pytest.raises(InvalidParams):
            bw.divergence_scan(DEFAULT, [1e3 * 3**j for j in range(7)])

    def test_schedule_builder(self):
        assert SCHEDULE[0] == 1e3 and SCHEDULE[-1] <= 1e6
        assert len(SCHEDULE) == 10
        assert all(b == 2 * a for a, b in zip(SCHEDULE, SCHEDULE[1:]))
