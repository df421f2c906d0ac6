import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from expdyn.fields import Window
from expdyn.sampling import SampleSet
from expdyn.strips import Family, StripId, strip_boundaries, strip_of

PI = math.pi


class TestStripOf:
    def test_principal_strip(self):
        assert strip_of(complex(-2, PI), Family.F, complex(-1, 0)) == \
            StripId(1, Family.F)

    def test_real_axis_excluded(self):
        assert strip_of(complex(-2, 0), Family.F, complex(-1, 0)) is None

    def test_translate_by_two_pi(self):
        assert strip_of(complex(-2, 3 * PI), Family.F, complex(-1, 0)) == \
            StripId(2, Family.F)

    def test_family_g_zero_strip(self):
        assert strip_of(complex(2, 0), Family.G, complex(-1, 0)) == \
            StripId(0, Family.G)

    def test_wrong_half_plane(self):
        assert strip_of(complex(2, PI), Family.F, complex(-1, 0)) is None
        assert strip_of(complex(-2, 0), Family.G, complex(-1, 0)) is None

    def test_boundary_belongs_to_no_strip(self):
        assert strip_of(complex(-1, PI / 2), Family.F, complex(-1, 0)) is None
        assert strip_of(complex(1, PI / 2), Family.G, complex(-1, 0)) is None

    def test_imaginary_offset_shifts_strips(self):
        lam = complex(-1, 0.75)
        # y - Im lam = pi sits inside strip 1
        assert strip_of(complex(-3, PI + 0.75), Family.F, lam) == \
            StripId(1, Family.F)
        assert strip_of(complex(-3, PI), Family.F, lam) == StripId(1, Family.F)

    def test_sign_test_agreement_bulk(self):
        # cross-check against the cosine characterization on 10^6 points
        pts = SampleSet.generate(2024, 1_000_000,
                                 Window(-50, 50, -50, 50)).points
        lam = complex(-2, 0.3)
        mu = complex(-1, -1.2)
        x = pts.real
        y = pts.imag
        expect_f = (x < 0) & (np.cos(y - lam.imag) < 0)
        expect_g = (x > 0) & (np.cos(y + mu.imag) > 0)
        got_f = np.fromiter(
            (strip_of(complex(a, b), Family.F, lam) is not None
             for a, b in zip(x, y)), dtype=bool, count=len(x))
        assert np.array_equal(got_f, expect_f)
        got_g = np.fromiter(
            (strip_of(complex(a, b), Family.G, mu) is not None
             for a, b in zip(x, y)), dtype=bool, count=len(x))
        assert np.array_equal(got_g, expect_g)

    @given(st.floats(-40, 40, allow_nan=False),
           st.floats(-40, -0.1, allow_nan=False),
           st.floats(-2, 2, allow_nan=False))
    @settings(max_examples=300, deadline=None)
    def test_two_pi_periodicity(self, y, x, im_lam):
        lam = complex(-1, im_lam)
        # stay away from boundaries; one float 2*pi step wobbles ~1e-15
        frac = ((y - im_lam) / (PI / 2)) % 1.0
        assume(min(frac, 1 - frac) > 1e-6)
        base = strip_of(complex(x, y), Family.F, lam)
        shifted = strip_of(complex(x, y) + complex(0, 2 * PI), Family.F, lam)
        if base is None:
            assert shifted is None
        else:
            assert shifted == StripId(base.k + 1, Family.F)


class TestStripBoundaries:
    def test_window_with_two_boundaries(self):
        got = strip_boundaries(0.0, 2 * PI, Family.F, complex(-1, 0))
        assert got == pytest.approx([PI / 2, 3 * PI / 2])

    def test_window_inside_one_strip(self):
        assert strip_boundaries(0.6 * PI, 1.4 * PI, Family.F,
                                complex(-1, 0)) == []

    def test_family_g_offset_sign(self):
        # boundaries at (2m+1)pi/2 - Im mu
        got = strip_boundaries(-2.0, 2.0, Family.G, complex(-1, 0.25))
        assert got == pytest.approx([-PI / 2 - 0.25, PI / 2 - 0.25])

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            strip_boundaries(1.0, 0.0, Family.F, complex(-1, 0))
