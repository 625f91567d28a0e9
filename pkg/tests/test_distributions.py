import math

import pytest
import scipy.stats
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from gazemap import distributions


class TestBetainc:
    @given(
        st.floats(min_value=0.5, max_value=60.0),
        st.floats(min_value=0.5, max_value=60.0),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_matches_scipy(self, a, b, x):
        ours = distributions.betainc(a, b, x)
        ref = float(scipy.special.betainc(a, b, x))
        assert ours == pytest.approx(ref, abs=1e-10)

    def test_bounds(self):
        assert distributions.betainc(2.0, 3.0, 0.0) == 0.0
        assert distributions.betainc(2.0, 3.0, 1.0) == 1.0

    def test_bad_params(self):
        with pytest.raises(ValueError):
            distributions.betainc(0.0, 1.0, 0.5)


class TestStudentT:
    @given(
        st.floats(min_value=-50.0, max_value=50.0),
        st.integers(min_value=1, max_value=200),
    )
    def test_matches_scipy(self, t, df):
        ours = distributions.student_t_two_sided_p(t, df)
        ref = float(2 * scipy.stats.t.sf(abs(t), df))
        assert ours == pytest.approx(ref, abs=1e-10)

    def test_t_zero_gives_one(self):
        assert distributions.student_t_two_sided_p(0.0, 10) == pytest.approx(1.0, abs=1e-12)


class TestNormalAndChi2:
    @given(st.floats(min_value=-8.0, max_value=8.0))
    def test_normal_matches_scipy(self, z):
        ours = distributions.normal_two_sided_p(z)
        ref = float(2 * scipy.stats.norm.sf(abs(z)))
        assert ours == pytest.approx(ref, abs=1e-12)

    @given(st.floats(min_value=0.0, max_value=40.0))
    def test_chi2_matches_scipy(self, x):
        ours = distributions.chi2_sf_1df(x)
        ref = float(scipy.stats.chi2.sf(x, 1))
        assert ours == pytest.approx(ref, abs=1e-12)
