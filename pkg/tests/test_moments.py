import numpy as np
import pytest

from pendular.moments import (
    MomentSet,
    c1_zero_crossing,
    coefficient_map,
    interpolated_root,
    moment_curves,
    moments,
    pseudo_spin_states,
    stark_map,
    up_leading_swap,
)


class TestMoments:
    def test_zero_field_all_moments_vanish(self):
        m = moments(0.0)
        assert m.c0 == pytest.approx(0.0, abs=1e-14)
        assert m.c1 == pytest.approx(0.0, abs=1e-14)
        assert m.cx == pytest.approx(0.0, abs=1e-14)
        assert m.delta_e == pytest.approx(0.0, abs=1e-12)

    def test_rejects_negative_field(self):
        with pytest.raises(ValueError):
            moments(-1.0)

    @pytest.mark.parametrize("x", [0.02, 0.05, 0.1])
    def test_small_field_gap_is_perturbative(self, x):
        # Second-order shifts give a gap of 3x^2/20.
        assert moments(x).delta_e == pytest.approx(0.15 * x * x, rel=0.02)

    @pytest.mark.parametrize("x", [0.5, 2.0, 7.0, 12.0])
    def test_moment_bounds(self, x):
        m = moments(x)
        assert abs(m.c0) <= 1 and abs(m.c1) <= 1 and abs(m.cx) <= 1
        assert m.delta_e >= 0

    @pytest.mark.parametrize("x", [0.0, 1.0, 4.0, 8.0, 12.0])
    def test_j_max_convergence_all_fields(self, x):
        a = moments(x, j_max=20)
        b = moments(x, j_max=30)
        diffs = [abs(a.e0 - b.e0), abs(a.e1 - b.e1), abs(a.c0 - b.c0), abs(a.c1 - b.c1), abs(a.cx - b.cx)]
        assert max(diffs) <= 1e-10

    def test_delta_e_property(self):
        m = MomentSet(x=1.0, e0=1.5, e1=2.25, c0=0.1, c1=-0.1, cx=0.2)
        assert m.delta_e == pytest.approx(0.75)

    def test_curves_against_point_evaluation(self):
        xs = np.array([0.0, 1.0, 3.5])
        curves = moment_curves(xs)
        for i, x in enumerate(xs):
            m = moments(float(x))
            assert curves["c0"][i] == pytest.approx(m.c0, abs=1e-15)
            assert curves["delta_e"][i] == pytest.approx(m.delta_e, abs=1e-15)


class TestMomentCurveShapes:
    def test_c0_strictly_increasing(self, dense_curves):
        assert np.all(np.diff(dense_curves["c0"]) > 0)

    def test_c0_minus_c1_positive_in_field(self, dense_curves):
        diff = dense_curves["c0"] - dense_curves["c1"]
        assert np.all(diff[1:] > 0)

    def test_cx_positive_in_field(self, dense_curves):
        assert np.all(dense_curves["cx"][1:] > 0)

    def test_delta_e_nonnegative(self, dense_curves):
        assert np.all(dense_curves["delta_e"] >= 0)

    def test_c1_has_single_interior_zero(self, dense_curves):
        c1 = dense_curves["c1"][1:]
        flips = np.sum(np.sign(c1[1:]) != np.sign(c1[:-1]))
        assert flips == 1

    def test_c1_zero_near_4_9(self, dense_curves):
        root = interpolated_root(dense_curves["x"][1:], dense_curves["c1"][1:])
        assert root == pytest.approx(4.9, abs=0.2)

    def test_c1_zero_crossing_helper(self):
        root = c1_zero_crossing(x_min=4.0, x_max=6.0, step=0.01)
        assert root == pytest.approx(4.9, abs=0.2)

    def test_gap_maximum_at_right_edge(self, dense_curves):
        gaps = dense_curves["delta_e"]
        assert np.argmax(gaps) == len(gaps) - 1
        assert gaps.max() == pytest.approx(3.7, abs=0.1)

    def test_down_energy_monotone_decreasing(self, dense_curves):
        assert np.all(np.diff(dense_curves["e0"]) < 0)


class TestStarkMap:
    def test_field_free_row_energies(self):
        table = stark_map([0.0, 1.0], m_values=(0,), n_states=4)
        first = [row for row in table.rows if row[0] == 0.0]
        energies = [row[3] for row in first]
        assert energies == pytest.approx([0.0, 2.0, 6.0, 12.0], abs=1e-12)
        assert [row[2] for row in first] == [0, 1, 2, 3]

    def test_row_ordering(self):
        table = stark_map([0.0, 2.0], m_values=(0, 1), n_states=2)
        key = [(row[0], row[1], row[2]) for row in table.rows]
        assert key == sorted(key)

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            stark_map([])

    def test_rejects_unsorted_grid(self):
        with pytest.raises(ValueError):
            stark_map([1.0, 0.5])

    def test_rejects_negative_grid(self):
        with pytest.raises(ValueError):
            stark_map([-1.0, 0.0])


class TestCoefficientMap:
    def test_zero_field_down_state(self):
        table = coefficient_map([0.0], state="down", j_max=10)
        coeffs = {row[1]: row[2] for row in table.rows}
        assert coeffs[1] == pytest.approx(1.0, abs=1e-12)
        assert all(abs(v) < 1e-12 for j, v in coeffs.items() if j != 1)

    @pytest.mark.parametrize("state", ["down", "up"])
    def test_normalization_per_field(self, state):
        table = coefficient_map([0.0, 3.0, 9.0], state=state, j_max=25)
        for x in (0.0, 3.0, 9.0):
            total = sum(row[2] ** 2 for row in table.rows if row[0] == x)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_rejects_unknown_state(self):
        with pytest.raises(ValueError):
            coefficient_map([1.0], state="sideways")

    def test_up_leading_component_swap_near_4_5(self):
        crossing = up_leading_swap(x_min=3.5, x_max=5.5, step=0.02)
        assert crossing == pytest.approx(4.5, abs=0.3)

    def test_up_y00_coefficient_negative_at_low_field(self):
        # With the J=1 component oriented positive, the J=0 admixture of the
        # up state enters with a negative sign.
        _, up, _, _ = pseudo_spin_states(2.0)
        assert up[1] > 0  # J=1 anchor
        assert up[0] < 0  # J=0 admixture

    def test_down_state_j1_component_dominant_through_12(self):
        # The J=2 admixture grows but never overtakes J=1 on [0, 12]; the
        # sign anchor used for continuity therefore stays safe.
        for x in np.arange(0.0, 12.01, 0.5):
            down, _, _, _ = pseudo_spin_states(float(x))
            assert np.argmax(np.abs(down)) == 0

    def test_coefficients_continuous_across_swap(self):
        # No sign jump when the up state's leading component changes.
        xs = np.arange(4.3, 4.8, 0.05)
        table = coefficient_map(xs, state="up", j_max=20)
        b0 = np.array([row[2] for row in table.rows if row[1] == 0])
        assert np.all(np.abs(np.diff(b0)) < 0.05)


class TestPlusMinusMDegeneracy:
    def test_down_partner_moments_match(self):
        # Building |down> in the m=-1 block gives the same energies and c0,
        # and the same transition moment magnitude.
        from pendular.rotor import BasisSpec, operator_matrix, solve_pendular

        x = 5.0
        m = moments(x)
        sol = solve_pendular(x, BasisSpec(m=-1))
        down = sol.state(1)
        anchor = down[sol.spec.index(1)]
        if anchor < 0:
            down = -down
        spec_m1 = BasisSpec(m=-1)
        spec_up = BasisSpec(m=0)
        c0_minus = down @ operator_matrix("cos_theta", spec_m1, spec_m1) @ down
        _, up, _, _ = pseudo_spin_states(x)
        cx_minus = down @ operator_matrix("sin_theta_cos_phi", spec_m1, spec_up) @ up
        assert sol.energy(1) == pytest.approx(m.e0, abs=1e-12)
        assert c0_minus == pytest.approx(m.c0, abs=1e-12)
        assert abs(cx_minus) == pytest.approx(m.cx, abs=1e-12)


class TestInterpolatedRoot:
    def test_simple_root(self):
        xs = np.linspace(0, 2, 21)
        ys = xs**2 - 1.0
        assert interpolated_root(xs, ys) == pytest.approx(1.0, abs=1e-6)

    def test_no_sign_change_raises(self):
        xs = np.linspace(0, 1, 5)
        with pytest.raises(ValueError):
            interpolated_root(xs, xs + 1.0)
