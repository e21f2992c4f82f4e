import math

import pytest
from hypothesis import given, strategies as st

from emopalette.config import DEFAULT_PARTITIONS, variables_from_spec
from emopalette.errors import ConfigError, DomainError
from emopalette.fuzzy import (
    LinguisticVariable,
    MembershipFunction,
    alpha_cut,
    apply_hedges,
    classify,
    eval_membership,
    normalize_hedge,
)


@pytest.fixture(scope="module")
def variables():
    return variables_from_spec(DEFAULT_PARTITIONS)


def tri(a, b, c):
    return MembershipFunction("triangular", (a, b, c))


def trap(a, b, c, d):
    return MembershipFunction("trapezoidal", (a, b, c, d))


class TestMembershipFunctions:
    def test_triangle_peak(self):
        assert eval_membership(tri(0, 5, 10), 5) == 1.0

    def test_triangle_rising_midpoint(self):
        assert eval_membership(tri(0, 5, 10), 2.5) == 0.5

    def test_trapezoid_plateau_edge_outside(self):
        mf = trap(0, 2, 4, 6)
        assert eval_membership(mf, 3) == 1.0
        assert eval_membership(mf, 5) == 0.5
        assert eval_membership(mf, 7) == 0.0

    def test_degenerate_shoulder_edges(self):
        # zero-width rising/falling edges behave as shoulders
        left = trap(0, 0, 10, 30)
        assert left(0) == 1.0
        right = trap(55, 75, 100, 100)
        assert right(100) == 1.0

    def test_cyclic_wraps_through_zero(self):
        red = MembershipFunction("trapezoidal", (315, 345, 375, 385),
                                 cyclic=True, period=360)
        assert red(0) == 1.0
        assert red(350) == 1.0
        assert red(17) == pytest.approx(0.8)
        assert red(100) == 0.0

    def test_malformed_breakpoints_rejected(self):
        with pytest.raises(ConfigError):
            tri(5, 0, 10)
        with pytest.raises(ConfigError):
            trap(0, 4, 2, 6)
        with pytest.raises(ConfigError):
            MembershipFunction("trapezoidal", (0, 100, 200, 400),
                               cyclic=True, period=360)
        with pytest.raises(ConfigError):
            MembershipFunction("gaussian", (0, 1, 2))

    def test_non_finite_input_rejected(self):
        with pytest.raises(DomainError):
            eval_membership(tri(0, 5, 10), float("nan"))

    @given(st.floats(-50, 50))
    def test_range_always_unit_interval(self, x):
        assert 0.0 <= trap(-10, -5, 5, 10)(x) <= 1.0


class TestHedges:
    def test_very(self):
        assert apply_hedges(["very"], 0.5) == 0.25

    def test_more_or_less(self):
        assert apply_hedges(["more-or-less"], 0.25) == 0.5

    def test_not(self):
        assert apply_hedges(["not"], 0.3) == 0.7

    def test_composition_innermost_first(self):
        # "not very": square first, complement second
        assert apply_hedges(["not", "very"], 0.6) == pytest.approx(0.64)

    @given(st.floats(0, 1))
    def test_very_inverts_more_or_less(self, u):
        assert apply_hedges(["very", "more-or-less"], u) == pytest.approx(u, abs=1e-12)

    @pytest.mark.parametrize("k", range(0, 1025, 64))
    def test_double_not_exact_on_dyadic_grid(self, k):
        u = k / 1024
        assert apply_hedges(["not", "not"], u) == u

    def test_out_of_range_degree_rejected(self):
        with pytest.raises(DomainError):
            apply_hedges(["very"], 1.5)
        with pytest.raises(DomainError):
            apply_hedges(["not"], -0.1)

    def test_unknown_hedge_rejected(self):
        with pytest.raises(DomainError):
            apply_hedges(["extremely"], 0.5)

    def test_normalize_spellings(self):
        assert normalize_hedge("more_or_less") == "more-or-less"
        assert normalize_hedge(" VERY ") == "very"
        with pytest.raises(DomainError):
            normalize_hedge("kinda")


class TestAlphaCut:
    def test_threshold(self):
        assert alpha_cut({"a": 0.9, "b": 0.5, "c": 0.1}, 0.5) == {"a", "b"}

    def test_kernel_at_alpha_one(self):
        assert alpha_cut({"a": 1.0, "b": 0.999}, 1.0) == {"a"}

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(DomainError):
            alpha_cut({"a": 1.0}, 0.0)
        with pytest.raises(DomainError):
            alpha_cut({"a": 1.0}, -0.2)

    @given(
        st.dictionaries(st.sampled_from("abcdef"), st.floats(0, 1), min_size=1),
        st.dictionaries(st.sampled_from("abcdef"), st.floats(0, 1), min_size=1),
        st.floats(0.01, 1.0),
    )
    def test_cut_distributes_over_union_and_intersection(self, a, b, alpha):
        universe = set(a) | set(b)
        union = {k: max(a.get(k, 0.0), b.get(k, 0.0)) for k in universe}
        inter = {k: min(a.get(k, 0.0), b.get(k, 0.0)) for k in universe}
        # element-wise oracle
        au = {k for k in universe if a.get(k, 0.0) >= alpha}
        bu = {k for k in universe if b.get(k, 0.0) >= alpha}
        assert alpha_cut(union, alpha) == au | bu
        assert alpha_cut(inter, alpha) == au & bu


class TestClassify:
    def test_saturation_endpoint(self, variables):
        assert classify(variables["saturation"], 0) == ("Low", 1.0)

    def test_hue_anchor_red_dominant(self, variables):
        term, mu = classify(variables["hue"], 17)
        assert term == "Red"
        assert mu > 0.5

    def test_crossover_tie_prefers_earlier_term(self, variables):
        # Low and Medium saturation are both 0.5 at x=20
        sat = variables["saturation"]
        degrees = sat.memberships(20)
        assert degrees["Low"] == degrees["Medium"] == 0.5
        assert classify(sat, 20)[0] == "Low"

    def test_outside_domain_rejected(self, variables):
        with pytest.raises(DomainError):
            classify(variables["saturation"], 101.0)
        with pytest.raises(DomainError):
            classify(variables["intensity"], -1.0)

    def test_edge_clamp_within_tolerance(self, variables):
        term, mu = classify(variables["saturation"], -1e-12)
        assert term == "Low" and mu == 1.0

    def test_deterministic(self, variables):
        results = {classify(variables["hue"], 123.456) for _ in range(50)}
        assert len(results) == 1


class TestPartitions:
    @pytest.mark.parametrize("name", ["hue", "saturation", "intensity", "match"])
    def test_ruspini_partition(self, variables, name):
        assert variables[name].ruspini_defect(1000) <= 1e-9

    def test_coverage_hole_rejected(self):
        with pytest.raises(ConfigError):
            LinguisticVariable(
                name="gappy",
                domain=(0.0, 10.0),
                terms=(("a", tri(0, 1, 2)), ("b", tri(8, 9, 10))),
            )

    def test_duplicate_term_names_rejected(self):
        with pytest.raises(ConfigError):
            LinguisticVariable(
                name="dup",
                domain=(0.0, 1.0),
                terms=(("a", trap(0, 0, 0.5, 1)), ("a", trap(0, 0.5, 1, 1))),
            )

    def test_term_order_preserved(self, variables):
        assert variables["hue"].term_names() == (
            "Red", "Orange", "Yellow", "Green", "Cyan", "Blue", "Violet", "Magenta"
        )
