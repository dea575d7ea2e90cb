"""
检验函数测试
"""

import numpy as np
import pytest

from domtest.criteria import COORDINATES, Domain, coordinate_domains, evaluate_g, evaluate_many
from domtest.data import Criterion, PolicySample, SupportBox, build_grid, pooled_support
from domtest.edf import EdfSummary
from domtest.errors import GridMismatchError

from conftest import random_sample

EXPECTED_COUNTS = {
    Criterion.LASBD: 5,
    Criterion.LASBD2: 5,
    Criterion.IASD: 4,
    Criterion.IASD2: 4,
    Criterion.LIASD: 5,
    Criterion.LIASD2: 5,
    Criterion.KR_ADDITIVE: 3,
}


def by_name(fields):
    return {f.name: f for f in fields}


class TestCoordinateDomains:
    """静态坐标表"""

    @pytest.mark.parametrize("kind", list(Criterion))
    def test_counts(self, kind):
        """各准则的坐标个数"""
        assert len(coordinate_domains(kind)) == EXPECTED_COUNTS[kind]

    def test_lasbd_shapes(self):
        """LASBD 各坐标的形状"""
        table = coordinate_domains(Criterion.LASBD)
        assert table[0] == ("F2(z)", Domain.Z_AXIS, (50,))
        assert table[1][2] == (99, 49)
        assert table[3] == ("F1(-x)", Domain.NEG_X_AXIS, (100,))

    def test_iasd_quadrant(self):
        """IASD 含中心化象限坐标"""
        name, domain, shape = coordinate_domains(Criterion.IASD, g_x=20, g_z=10)[3]
        assert domain is Domain.X1X2_QUADRANT
        assert shape == (20, 20)

    def test_kr_has_no_joint_plane(self):
        """KR 不含联合平面坐标"""
        planes = {Domain.XZ_PLANE_NEGX, Domain.XZ_PLANE_POSX}
        assert all(d not in planes for _, d, _ in coordinate_domains(Criterion.KR_ADDITIVE))

    def test_lasbd2_gain_loss_uses_both_signs(self):
        """LASBD2 第五坐标为 F1(x)+F1(-x)"""
        assert COORDINATES[Criterion.LASBD2][4] == "F1(x)+F1(-x)"


class TestEvaluateG:
    """检验函数取值"""

    @pytest.mark.parametrize("kind", list(Criterion))
    def test_shapes_and_weights(self, kind, edf_pair):
        """取值与权重形状一致"""
        edf_a, edf_b, grid = edf_pair
        fields = evaluate_g(kind, edf_a, edf_b, grid)
        table = coordinate_domains(kind, grid.g_x, grid.g_z)
        assert [(f.name, f.domain, f.shape) for f in fields] == table
        for f in fields:
            assert f.weights.shape == f.values.shape
            assert np.all(f.weights > 0)
            assert np.all(np.isfinite(f.values))

    @pytest.mark.parametrize("kind", list(Criterion))
    def test_identical_samples_give_zero(self, kind):
        """相同样本的差为零"""
        a = random_sample("A", 40, 21)
        perm = np.random.default_rng(0).permutation(40)
        b = PolicySample("B", a.x[perm], a.z[perm])
        box = pooled_support(a, b)
        grid = build_grid(box, 12, 9)
        fields = evaluate_g(kind, EdfSummary.from_sample(a, box), EdfSummary.from_sample(b, box), grid)
        for f in fields:
            assert np.all(f.values == 0.0), f.name

    @pytest.mark.parametrize("kind", list(Criterion))
    def test_antisymmetry(self, kind, edf_pair):
        """交换两组后差取反"""
        edf_a, edf_b, grid = edf_pair
        ab = evaluate_g(kind, edf_a, edf_b, grid)
        ba = evaluate_g(kind, edf_b, edf_a, grid)
        for f, g in zip(ab, ba, strict=True):
            assert np.array_equal(f.values, -g.values), f.name

    def test_hand_evaluated_f2(self):
        """F2 差与手算结果一致"""
        a = PolicySample("A", [-1.0, -1.0], [1.0, 1.0])
        b = PolicySample("B", [1.0, 1.0], [2.0, 2.0])
        box = pooled_support(a, b)
        grid = build_grid(box, 5, 3)  # z = 1, 1.5, 2
        f2 = by_name(evaluate_g(Criterion.LASBD, EdfSummary.from_sample(a, box), EdfSummary.from_sample(b, box), grid))["F2(z)"]
        assert f2.values.tolist() == [1.0, 1.0, 0.0]

    @pytest.mark.parametrize("kind", [Criterion.IASD, Criterion.IASD2])
    def test_centered_coordinate_zero_at_origin(self, kind, edf_pair):
        """中心化坐标在原点为零"""
        edf_a, edf_b, grid = edf_pair
        quad = by_name(evaluate_g(kind, edf_a, edf_b, grid))["S1(x1)-H1(-x2)-centered"]
        assert quad.values[0, 0] == 0.0

    def test_liasd_is_union_of_iasd_and_lasbd(self, edf_pair):
        """LIASD 坐标为 IASD 与 LASBD 的并"""
        edf_a, edf_b, grid = edf_pair
        many = evaluate_many([Criterion.LIASD, Criterion.IASD, Criterion.LASBD], edf_a, edf_b, grid)
        liasd = by_name(many[Criterion.LIASD])
        iasd = by_name(many[Criterion.IASD])
        lasbd = by_name(many[Criterion.LASBD])
        for name in ("H2(z)", "H(-x,z)", "H(x,z)"):
            assert np.array_equal(liasd[name].values, iasd[name].values)
        for name in ("F1(-x)", "F1(x)+F1(-x)"):
            assert np.array_equal(liasd[name].values, lasbd[name].values)

    def test_gain_loss_pair_equals_max_form(self, edf_pair):
        """F¹(-m) 与 F¹(m)+F¹(-m) 两个坐标同时非正，当且仅当 max 形式的不等式成立"""
        edf_a, edf_b, grid = edf_pair
        fields = by_name(evaluate_g(Criterion.LASBD, edf_a, edf_b, grid))
        m = grid.x_pos_points
        n = edf_a.n
        assert edf_b.n == n

        def counts(v):
            return np.rint(np.asarray(v) * n).astype(int)

        pair_ok = (counts(fields["F1(-x)"].values) <= 0) & (counts(fields["F1(x)+F1(-x)"].values) <= 0)
        fa_neg, fb_neg = counts(edf_a.cdf1(-m)), counts(edf_b.cdf1(-m))
        fa_pos, fb_pos = counts(edf_a.cdf1(m)), counts(edf_b.cdf1(m))
        # F¹_A(-m) - F¹_B(-m) <= min(0, F¹_B(m) - F¹_A(m))
        max_form = (fa_neg - fb_neg) <= np.minimum(0, fb_pos - fa_pos)
        assert np.array_equal(pair_ok, max_form)

    def test_negative_magnitudes_beyond_support_are_constant(self):
        """样本全为正时 F1(-m) 恒为零"""
        a = PolicySample("A", [0.5, 1.0, 2.0], [1.0, 2.0, 3.0])
        b = PolicySample("B", [0.2, 0.4, 3.0], [1.5, 2.5, 3.5])
        box = pooled_support(a, b)
        grid = build_grid(box, 6, 4)
        f = by_name(evaluate_g(Criterion.LASBD, EdfSummary.from_sample(a, box), EdfSummary.from_sample(b, box), grid))
        # 所有 x > 0，F¹(-m) 恒为 0
        assert np.all(f["F1(-x)"].values == 0.0)
        assert np.all(f["F(-x,z)"].values == 0.0)

    def test_grid_mismatch(self, sample_pair):
        """两组原点与网格不一致时报错"""
        a, b = sample_pair
        box = pooled_support(a, b)
        grid = build_grid(box, 10, 8)
        shifted = SupportBox(box.x_min - 1.0, box.x_max, box.z_min, box.z_max)
        with pytest.raises(GridMismatchError):
            evaluate_g(Criterion.LASBD, EdfSummary.from_sample(a, shifted), EdfSummary.from_sample(b, box), grid)
