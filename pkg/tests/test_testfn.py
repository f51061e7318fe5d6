"""Family functions and their descriptor grammar."""

import numpy as np
import pytest

from gninterp.errors import (
    BadParams,
    DslSyntaxError,
    JetOrderOverflow,
    UnknownFamily,
    UnsupportedDimension,
)
from gninterp.testfn import bump, bump_poly, bump_wave, parse_testfn, plateau


class TestFamilies:
    def test_bump_poly_vanishes_with_odd_symmetry(self):
        fn = bump_poly(1, deg=1)
        xs = np.array([[-0.4], [0.4]])
        vals = fn(xs)
        assert vals[0] == pytest.approx(-vals[1], rel=1e-14)
        assert fn(np.array([[0.0]]))[0] == 0.0

    def test_bump_wave_modulates(self):
        fn = bump_wave(1, omega=np.pi)
        base = bump(1)
        x = np.array([[0.5]])
        assert fn(x)[0] == pytest.approx(np.cos(np.pi * 0.5) * base(x)[0], rel=1e-12)

    def test_plateau_is_one_inside(self):
        fn = plateau(1, rho=0.5)
        xs = np.array([[-0.4], [0.0], [0.3]])
        np.testing.assert_array_equal(fn(xs), 1.0)

    def test_plateau_jets_vanish_on_flat_part(self):
        fn = plateau(1, rho=0.5)
        jet = fn.jet(np.array([[0.2]]), 3)
        for order in (1, 2, 3):
            assert jet[(order,)][0] == 0.0

    def test_plateau_transition_monotone(self):
        fn = plateau(1, rho=0.5)
        xs = np.linspace(0.55, 0.95, 9).reshape(-1, 1)
        vals = fn(xs)
        assert np.all(np.diff(vals) < 0)
        assert np.all((vals > 0) & (vals < 1))

    def test_bad_params(self):
        with pytest.raises(BadParams):
            bump(1, R=-2.0)
        with pytest.raises(BadParams):
            plateau(1, rho=1.5)
        with pytest.raises(BadParams):
            bump_poly(2, axis=5)

    def test_dimension_cap(self):
        with pytest.raises(UnsupportedDimension):
            bump(4)

    def test_jet_order_cap(self):
        with pytest.raises(JetOrderOverflow):
            bump(1).jet(np.zeros((1, 1)), 9)


class TestSupportGeometry:
    def test_bounding_box_margin(self):
        fn = bump(2, R=2.0).translate([1.0, -1.0])
        lo, hi = fn.bounding_box(1.5)
        np.testing.assert_allclose(lo, [-2.0, -4.0])
        np.testing.assert_allclose(hi, [4.0, 2.0])

    def test_dilate_shrinks_support(self):
        fn = bump(1).dilate(4.0)
        _, r = fn.support()
        assert r == pytest.approx(0.25)
        assert fn(np.array([[0.3]]))[0] == 0.0


class TestDescriptorGrammar:
    @pytest.mark.parametrize(
        "text",
        [
            "bump(R=1)",
            "bump_poly(R=1.5,deg=2)",
            "bump_wave(R=1,omega=4.5)",
            "plateau(R=1,rho=0.25)",
            "bump(R=1)*dilate(2)*translate(0.3)*amp(0.5)",
        ],
    )
    def test_describe_round_trip(self, text):
        fn = parse_testfn(text, 1)
        again = parse_testfn(fn.describe(), 1)
        xs = np.linspace(-1.2, 1.2, 7).reshape(-1, 1)
        np.testing.assert_array_equal(fn(xs), again(xs))
        assert again.describe() == fn.describe()

    def test_vector_translate(self):
        fn = parse_testfn("bump(R=1)*translate(0.2,-0.4)", 2)
        assert fn.center == pytest.approx((0.2, -0.4))

    def test_transforms_compose_in_order(self):
        fn = parse_testfn("bump(R=1)*translate(1)*dilate(2)", 1)
        # translate then dilate: support center ends at 1/2
        assert fn.center[0] == pytest.approx(0.5)

    @pytest.mark.parametrize(
        "bad,exc",
        [
            ("mystery(R=1)", UnknownFamily),
            ("bump", DslSyntaxError),
            ("bump(1)", DslSyntaxError),
            ("bump(R=x)", DslSyntaxError),
            ("bump(R=1)*spin(3)", DslSyntaxError),
            ("bump(R=1)*dilate(1,2)", DslSyntaxError),
            ("bump(R=1)*dilate(a)", DslSyntaxError),
            ("", DslSyntaxError),
            ("bump(q=3)", BadParams),
        ],
    )
    def test_rejects_malformed(self, bad, exc):
        with pytest.raises(exc):
            parse_testfn(bad, 1)
