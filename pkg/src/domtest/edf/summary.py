"""
经验分布摘要模块

对单组样本预先排序并计算前缀和，之后以闭式精确计算：
- F¹, F², F: 边际与联合经验分布函数
- K = F¹ + F² - F
- H¹, S¹, H²: 边际 CDF 的下积分 / 上尾积分
- H, L: 联合 CDF 与 K 在左下矩形上的二重积分

单点查询 O(log n)；网格查询用累计二维直方图，O(n + 网格大小)
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from domtest.data.model import PolicySample, SupportBox

GridFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _as_query(values: npt.ArrayLike) -> tuple[np.ndarray, bool]:
    arr = np.asarray(values, dtype=float)
    return arr, arr.ndim == 0


def _out(result: np.ndarray, scalar: bool) -> np.ndarray | float:
    return float(result) if scalar else result


@dataclass(frozen=True, eq=False)
class EdfSummary:
    """
    单组样本的不可变经验分布摘要

    origin_x / origin_z 取合并支撑集的最小值，两组共用同一原点，
    使 L_A - L_B 在同一矩形上比较
    """

    xs_sorted: np.ndarray
    zs_sorted: np.ndarray
    pairs: np.ndarray  # 原始 (x, z)，按输入行序
    n: int
    origin_x: float
    origin_z: float

    # 前缀和与按 (x, z) 字典序排好的样本对
    _px: np.ndarray = field(init=False, repr=False)
    _pz: np.ndarray = field(init=False, repr=False)
    _sorted_pairs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        px = np.concatenate(([0.0], np.cumsum(self.xs_sorted)))
        pz = np.concatenate(([0.0], np.cumsum(self.zs_sorted)))
        order = np.lexsort((self.pairs[:, 1], self.pairs[:, 0]))
        sorted_pairs = self.pairs[order]
        for arr in (self.xs_sorted, self.zs_sorted, self.pairs, px, pz, sorted_pairs):
            arr.setflags(write=False)
        object.__setattr__(self, "_px", px)
        object.__setattr__(self, "_pz", pz)
        object.__setattr__(self, "_sorted_pairs", sorted_pairs)

    @classmethod
    def from_arrays(
        cls,
        x: npt.ArrayLike,
        z: npt.ArrayLike,
        origin_x: float,
        origin_z: float,
    ) -> EdfSummary:
        """
        由样本数组构造

        Args:
            x: 收入变化
            z: 收入水平
            origin_x: 积分原点（合并 x 最小值）
            origin_z: 积分原点（合并 z 最小值）

        Returns:
            EdfSummary
        """
        x = np.array(x, dtype=float)
        z = np.array(z, dtype=float)
        return cls(
            xs_sorted=np.sort(x),
            zs_sorted=np.sort(z),
            pairs=np.column_stack((x, z)),
            n=len(x),
            origin_x=float(origin_x),
            origin_z=float(origin_z),
        )

    @classmethod
    def from_sample(cls, sample: PolicySample, box: SupportBox) -> EdfSummary:
        """由 PolicySample 与合并支撑矩形构造"""
        return cls.from_arrays(sample.x, sample.z, box.x_min, box.z_min)

    # ============== 边际 ==============

    def cdf1(self, x: npt.ArrayLike) -> np.ndarray | float:
        """F¹(x) = #{x_i <= x} / n"""
        q, scalar = _as_query(x)
        k = np.searchsorted(self.xs_sorted, q, side="right")
        return _out(k / self.n, scalar)

    def cdf2(self, z: npt.ArrayLike) -> np.ndarray | float:
        """F²(z) = #{z_i <= z} / n"""
        q, scalar = _as_query(z)
        k = np.searchsorted(self.zs_sorted, q, side="right")
        return _out(k / self.n, scalar)

    def h1(self, x: npt.ArrayLike) -> np.ndarray | float:
        """H¹(x) = E_n[(x - X)+]"""
        q, scalar = _as_query(x)
        return _out(self._lower_integral(self.xs_sorted, self._px, q), scalar)

    def s1(self, x: npt.ArrayLike) -> np.ndarray | float:
        """S¹(x) = E_n[(X - x)+]"""
        q, scalar = _as_query(x)
        k = np.searchsorted(self.xs_sorted, q, side="right")
        upper = (self._px[-1] - self._px[k]) - (self.n - k) * q
        return _out(upper / self.n, scalar)

    def h2(self, z: npt.ArrayLike) -> np.ndarray | float:
        """H²(z) = E_n[(z - Z)+]"""
        q, scalar = _as_query(z)
        return _out(self._lower_integral(self.zs_sorted, self._pz, q), scalar)

    def _lower_integral(self, sorted_values: np.ndarray, prefix: np.ndarray, q: np.ndarray) -> np.ndarray:
        # 只累加严格小于 q 的点，等于 q 的点贡献为 0
        k = np.searchsorted(sorted_values, q, side="left")
        return (k * q - prefix[k]) / self.n

    def mean_x(self) -> float:
        return float(self._px[-1] / self.n)

    # ============== 联合（逐点） ==============

    def joint_cdf(self, x: npt.ArrayLike, z: npt.ArrayLike) -> np.ndarray | float:
        """F(x, z) = #{x_i <= x, z_i <= z} / n"""
        return self._pointwise(self.joint_cdf_grid, x, z)

    def k_fn(self, x: npt.ArrayLike, z: npt.ArrayLike) -> np.ndarray | float:
        """K(x, z) = F¹(x) + F²(z) - F(x, z)"""
        return self._pointwise(self.k_grid, x, z)

    def h_joint(self, x: npt.ArrayLike, z: npt.ArrayLike) -> np.ndarray | float:
        """H(x, z) = E_n[(x - X)+ (z - Z)+]"""
        return self._pointwise(self.h_joint_grid, x, z)

    def l_joint(self, x: npt.ArrayLike, z: npt.ArrayLike) -> np.ndarray | float:
        """L(x, z) = ∫∫ K，积分区域 [origin_x, x] × [origin_z, z]"""
        return self._pointwise(self.l_joint_grid, x, z)

    def _pointwise(self, grid_fn: GridFn, x: npt.ArrayLike, z: npt.ArrayLike) -> np.ndarray | float:
        qx, qz = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
        scalar = qx.ndim == 0
        ux, ix = np.unique(qx.ravel(), return_inverse=True)
        uz, iz = np.unique(qz.ravel(), return_inverse=True)
        values = grid_fn(ux, uz)[ix.ravel(), iz.ravel()].reshape(qx.shape)
        return _out(values, scalar)

    # ============== 联合（网格） ==============

    def joint_cdf_grid(self, xq: npt.ArrayLike, zq: npt.ArrayLike) -> np.ndarray:
        """F 在 xq × zq 外积网格上的取值，形状 (len(xq), len(zq))"""
        (count,) = self._on_grid(xq, zq, with_moments=False)
        return count / self.n

    def k_grid(self, xq: npt.ArrayLike, zq: npt.ArrayLike) -> np.ndarray:
        """K 在网格上的取值"""
        xq = np.asarray(xq, dtype=float)
        zq = np.asarray(zq, dtype=float)
        f1 = np.asarray(self.cdf1(xq))[:, None]
        f2 = np.asarray(self.cdf2(zq))[None, :]
        return f1 + f2 - self.joint_cdf_grid(xq, zq)

    def h_joint_grid(self, xq: npt.ArrayLike, zq: npt.ArrayLike) -> np.ndarray:
        """H 在网格上的取值"""
        xq = np.asarray(xq, dtype=float)
        zq = np.asarray(zq, dtype=float)
        count, sx, sz, sxz = self._on_grid(xq, zq, with_moments=True)
        gx = xq[:, None]
        gz = zq[None, :]
        # Σ (x - x_i)(z - z_i)，只对 x_i <= x, z_i <= z 求和
        total = gx * (gz * count - sz) - (gz * sx - sxz)
        return np.maximum(total / self.n, 0.0)

    def l_joint_grid(self, xq: npt.ArrayLike, zq: npt.ArrayLike) -> np.ndarray:
        """L 在网格上的取值；原点以下的矩形为空，取 0"""
        xe = np.maximum(np.asarray(xq, dtype=float), self.origin_x)
        ze = np.maximum(np.asarray(zq, dtype=float), self.origin_z)
        h1 = np.asarray(self.h1(xe))[:, None]
        h2 = np.asarray(self.h2(ze))[None, :]
        width = (xe - self.origin_x)[:, None]
        height = (ze - self.origin_z)[None, :]
        total = height * h1 + width * h2 - self.h_joint_grid(xe, ze)
        return np.maximum(total, 0.0)

    def _on_grid(self, xq: npt.ArrayLike, zq: npt.ArrayLike, with_moments: bool) -> list[np.ndarray]:
        """
        累计二维直方图

        每个样本点落入第一个覆盖它的网格格点，沿两轴累加。
        with_moments=False 时得到 #{x_i <= x, z_i <= z}；
        with_moments=True 时对 {x_i < x, z_i < z} 累加计数及一阶/交叉矩
        （边界上的点对 H 贡献为 0，严格不等式使支撑下界处结果恰为 0）
        """
        xq = np.asarray(xq, dtype=float)
        zq = np.asarray(zq, dtype=float)
        x_order = np.argsort(xq, kind="stable")
        z_order = np.argsort(zq, kind="stable")
        xs_grid = xq[x_order]
        zs_grid = zq[z_order]
        a, b = len(xs_grid), len(zs_grid)

        px = self._sorted_pairs[:, 0]
        pz = self._sorted_pairs[:, 1]
        side = "right" if with_moments else "left"
        flat = np.searchsorted(xs_grid, px, side=side) * (b + 1) + np.searchsorted(
            zs_grid, pz, side=side
        )
        size = (a + 1) * (b + 1)

        weights: list[np.ndarray | None] = [None]
        if with_moments:
            weights += [px, pz, px * pz]

        out: list[np.ndarray] = []
        x_back = np.argsort(x_order, kind="stable")
        z_back = np.argsort(z_order, kind="stable")
        for w in weights:
            hist = np.bincount(flat, weights=w, minlength=size).astype(float).reshape(a + 1, b + 1)
            cum = hist.cumsum(axis=0).cumsum(axis=1)[:a, :b]
            out.append(cum[x_back][:, z_back])
        return out


def describe_sample(edf: EdfSummary) -> dict[str, float | int]:
    """
    组内描述统计

    S¹(0) 为平均收益，H¹(0) 为平均损失，二者之差为平均变化
    """
    return {
        "n": edf.n,
        "mean_change": edf.mean_x(),
        "mean_gain": float(edf.s1(0.0)),
        "mean_loss": float(edf.h1(0.0)),
        "mean_level": float(edf._pz[-1] / edf.n),
    }
