import math

import pytest
from hypothesis import given, settings

from expdyn.maps import (
    Compose,
    Conjugate,
    FamilyF,
    FamilyG,
    InvalidMapError,
    Iterate,
    ScaledExp,
    Shift,
)
from expdyn.parser import (
    MapSyntaxError,
    format_complex,
    format_map,
    parse_complex,
    parse_map,
)

from helpers import map_exprs


class TestParse:
    def test_family_f_literal(self):
        assert parse_map("F(-1+0i, 1)") == FamilyF(complex(-1, 0), complex(1, 0))

    def test_period_shift_example(self):
        got = parse_map("shift(iter(exp(1), 2), 0+6.283185307i)")
        assert got == Shift(Iterate(ScaledExp(complex(1, 0)), 2),
                            complex(0, 6.283185307))

    def test_validation_runs_after_parse(self):
        with pytest.raises(InvalidMapError, match=r"Re\(lambda\) < 0"):
            parse_map("F(1, 1)")

    def test_whitespace_insignificant(self):
        a = parse_map("comp( F( -1 , 1 ) ,G(-1,-1) )")
        b = parse_map("comp(F(-1,1),G(-1,-1))")
        assert a == b == Compose(FamilyF(complex(-1, 0), complex(1, 0)),
                                 FamilyG(complex(-1, 0), complex(-1, 0)))

    def test_conjugate(self):
        got = parse_map("conj(2, 1+1i, F(-1, 1))")
        assert got == Conjugate(complex(2, 0), complex(1, 1),
                                FamilyF(complex(-1, 0), complex(1, 0)))

    def test_negative_imaginary(self):
        assert parse_complex("1.5-2.25i") == complex(1.5, -2.25)

    def test_exponent_notation(self):
        assert parse_complex("1e-12+2.5e3i") == complex(1e-12, 2500.0)

    def test_syntax_error_offset(self):
        with pytest.raises(MapSyntaxError) as exc:
            parse_map("F(-1; 1)")
        assert exc.value.offset == 4

    def test_unknown_keyword(self):
        with pytest.raises(MapSyntaxError) as exc:
            parse_map("H(1, 2)")
        assert exc.value.offset == 0

    def test_trailing_garbage(self):
        with pytest.raises(MapSyntaxError, match="trailing"):
            parse_map("F(-1, 1) extra")

    def test_j_suffix_rejected(self):
        with pytest.raises(MapSyntaxError):
            parse_map("F(-1+0j, 1)")

    def test_missing_i_suffix(self):
        with pytest.raises(MapSyntaxError, match="expected 'i'"):
            parse_complex("1+2")


class TestFormat:
    def test_real_only_stays_bare(self):
        assert format_complex(complex(-1.0, 0.0)) == "-1.0"

    def test_signed_imaginary(self):
        assert format_complex(complex(0.5, -2.0)) == "0.5-2.0i"
        assert format_complex(complex(0.5, 2.0)) == "0.5+2.0i"

    def test_canonical_map(self):
        expr = Shift(Iterate(ScaledExp(complex(1, 0)), 2),
                     complex(0, 2 * math.pi))
        assert format_map(expr) == "shift(iter(exp(1.0), 2), 0.0+6.283185307179586i)"

    @given(map_exprs(max_leaves=6))
    @settings(max_examples=300, deadline=None)
    def test_round_trip_identity(self, expr):
        assert parse_map(format_map(expr)) == expr
