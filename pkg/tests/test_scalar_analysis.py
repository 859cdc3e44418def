import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opineq import scalar_analysis as sa
from opineq.scalar_analysis import lemma21_f, lemma22_g


def test_constant_c():
    assert sa.C_CONST.numerator == 2**7 - 1
    assert sa.C_CONST.denominator == 5**4
    assert sa.C_VALUE == 127 / 625


def test_interval_validation():
    with pytest.raises(ValueError):
        sa.Interval(2.0, 0.0)
    with pytest.raises(ValueError):
        sa.Interval(0.0, math.inf)
    assert sa.Interval(0.0, 2.0).span == 2.0


def test_hh_square_matches_antiderivative():
    rep = sa.hh_verify(lambda x: x * x, sa.Interval(0, 2))
    assert rep.chain() == pytest.approx((1.0, 4.0 / 3.0, 2.0), rel=1e-12)
    assert rep.chain_holds


def test_hh_affine_collapses():
    rep = sa.hh_verify(lambda x: 3 * x - 1, sa.Interval(0, 1))
    assert rep.chain() == pytest.approx((0.5, 0.5, 0.5))
    assert rep.chain_holds


def test_hh_concave_lemma_function_closed_form():
    v, x = 0.5, 4.0
    rep = sa.hh_verify(lemma21_f(v), sa.Interval(1, x), "concave")
    assert rep.chain_holds
    assert rep.mean_integral * (x - 1) == pytest.approx((1 - v) + v * x - x**v, rel=1e-10)
    assert rep.midpoint_value >= rep.mean_integral >= rep.endpoint_average


def test_hh_wrong_shape_is_reported():
    assert not sa.hh_verify(lambda x: x * x, sa.Interval(0, 2), "concave").chain_holds


def test_hh_rejects_few_panels_and_bad_shape():
    with pytest.raises(ValueError):
        sa.hh_verify(np.exp, sa.Interval(0, 1), n_panels=8)
    with pytest.raises(ValueError):
        sa.hh_verify(np.exp, sa.Interval(0, 1), "wavy")


def test_hh_non_finite_names_abscissa():
    with np.errstate(divide="ignore"), pytest.raises(sa.EvaluationError, match="x = 0.0"):
        sa.hh_verify(lambda x: 1.0 / x, sa.Interval(0.0, 1.0))


def test_hh_accepts_scalar_only_callables():
    rep = sa.hh_verify(math.exp, sa.Interval(0, 1))
    assert rep.mean_integral == pytest.approx(math.e - 1, rel=1e-12)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-10, 10), st.floats(0.1, 10))
def test_hh_affine_property(a, b, lo, width):
    rep = sa.hh_verify(lambda x: a * x + b, sa.Interval(lo, lo + width))
    assert rep.chain_holds
    scale = 1 + abs(a) * (abs(lo) + width) + abs(b)
    assert rep.mean_integral == pytest.approx(rep.midpoint_value, abs=1e-10 * scale)
    assert rep.endpoint_average == pytest.approx(rep.midpoint_value, abs=1e-10 * scale)


@given(st.floats(0.0, 1.0), st.floats(1.01, 100.0))
def test_hh_reproduces_additive_bounds(v, x):
    rep = sa.hh_verify(lemma21_f(v), sa.Interval(1.0, x), "concave")
    assert rep.chain_holds
    span = x - 1
    y = (1 - v) + v * x
    assert rep.mean_integral * span + x**v == pytest.approx(y, rel=1e-9)
    lower = v * span * (1 - x ** (v - 1)) / 2 + x**v
    upper = v * span * (1 - ((1 + x) / 2) ** (v - 1)) + x**v
    assert lower <= y * (1 + 1e-12) and y <= upper * (1 + 1e-12)


def test_convexity_scan_examples():
    assert sa.convexity_scan(lemma21_f(0.5), sa.Interval(0.1, 50)).kind == "concave"
    assert sa.convexity_scan(lemma22_g(0.5), sa.Interval(0.1, 4.9)).kind == "concave"
    assert sa.convexity_scan(lemma22_g(0.5), sa.Interval(5.1, 50)).kind == "convex"
    assert sa.convexity_scan(lambda x: x * x, sa.Interval(-1, 1)).kind == "convex"


def test_convexity_scan_mixed_witness_near_threshold():
    verdict = sa.convexity_scan(lemma22_g(0.5), sa.Interval(0.1, 50), grid_n=2000)
    assert verdict.kind == "mixed"
    assert verdict.witness == pytest.approx(5.0, abs=0.1)


def test_convexity_scan_affine_is_both():
    verdict = sa.convexity_scan(lambda x: 2 * x + 1, sa.Interval(0, 10))
    assert verdict.convex and verdict.concave


def test_convexity_scan_grid_floor():
    with pytest.raises(ValueError):
        sa.convexity_scan(np.exp, sa.Interval(0, 1), grid_n=4)


def test_log_gap_values():
    assert sa.aux_eval("log_gap", t=1.0) == 0.0
    # frozen from a 40-digit mpmath evaluation of 2(c-1) - log c
    assert sa.aux_eval("log_gap", t=sa.C_VALUE) == pytest.approx(-3.5436722189774644e-05, rel=1e-10)
    assert abs(sa.log_gap(sa.C_VALUE) - (-0.0000354367)) <= 1e-8


@pytest.mark.parametrize("v", [0.0, 0.3, 0.5, 1.0])
def test_power_upper_gap_vanishes_at_one(v):
    assert sa.aux_eval("power_upper_gap", v=v, t=1.0) == 0.0


def test_aux_eval_region_checks():
    with pytest.raises(sa.RegionError):
        sa.aux_eval("u_v", v=0.5, x=2.0)
    with pytest.raises(sa.RegionError):
        sa.aux_eval("mM_gap", v=0.5, x=0.0)
    with pytest.raises(KeyError):
        sa.aux_eval("nope", x=1.0)
    with pytest.raises(ValueError):
        sa.aux_eval("u_v", v=0.8)


@pytest.mark.parametrize("name", sa.aux_names())
def test_catalog_claims_hold_on_default_grid(name):
    rep = sa.check_sign_region(name)
    assert rep.ok, rep
    assert rep.attempted >= 199


def test_catalog_has_observation_entries():
    obs = {n for n in sa.aux_names() if sa.CATALOG[n].observation}
    assert obs == {"u_v_observed", "w_v_high_observed", "w_v_low_observed"}
    assert set(sa.aux_names(include_observations=False)).isdisjoint(obs)


def test_sign_region_rejects_grid_outside_claim():
    with pytest.raises(sa.RegionError):
        sa.check_sign_region("u_v", {"v": (0.6, 1.0, 50), "x": (1.0, 100.0, 50)})


def test_u_v_observation_boundary():
    ok = sa.check_sign_region("u_v_observed", {"v": (0.7, 1.0, 200), "x": (1.0, 100.0, 200)})
    assert ok.ok
    # just below the observed threshold the function does go negative
    vals = sa.CATALOG["u_v"].func(0.65, np.geomspace(1, 100, 200))
    assert vals.min() < 0


def test_w_v_fails_in_the_middle():
    vals = sa.CATALOG["w_v_high"].func(0.55, np.geomspace(1, 100, 200))
    assert vals.min() < 0


def test_default_grid_caps():
    grid = sa.default_grid("mM_gap")
    assert grid["x"][:2] == (sa.X_FLOOR, 1.0)
    assert sa.default_grid("u_v")["x"][1] == sa.X_CAP
