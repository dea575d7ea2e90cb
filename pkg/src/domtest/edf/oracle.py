"""
暴力参考实现

逐点计数的经验分布函数，以及在细网格上对阶梯函数做梯形积分得到的
H¹ / S¹ / H² / H / L。只用于校验 EdfSummary 的闭式结果，速度很慢。

网格包含所有样本点及其左侧紧邻的浮点数，阶梯跳跃处的梯形误差为 0
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy.integrate import cumulative_trapezoid


def naive_cdf(sample: npt.ArrayLike, queries: npt.ArrayLike) -> np.ndarray:
    """#{s_i <= q} / n，逐点 O(n)"""
    s = np.asarray(sample, dtype=float)
    q = np.asarray(queries, dtype=float)
    return np.array([np.count_nonzero(s <= v) for v in q.ravel()], dtype=float).reshape(q.shape) / len(s)


def naive_joint_cdf(
    x: npt.ArrayLike,
    z: npt.ArrayLike,
    xq: npt.ArrayLike,
    zq: npt.ArrayLike,
) -> np.ndarray:
    """外积网格 xq × zq 上的 #{x_i <= x, z_i <= z} / n"""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    xq = np.asarray(xq, dtype=float)
    zq = np.asarray(zq, dtype=float)
    counts = np.zeros((len(xq), len(zq)))
    for xi, zi in zip(x, z, strict=True):
        counts += (xq >= xi)[:, None] & (zq >= zi)[None, :]
    return counts / len(x)


def naive_survival(
    x: npt.ArrayLike,
    z: npt.ArrayLike,
    xq: npt.ArrayLike,
    zq: npt.ArrayLike,
) -> np.ndarray:
    """外积网格上的 #{x_i > x, z_i > z} / n"""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    xq = np.asarray(xq, dtype=float)
    zq = np.asarray(zq, dtype=float)
    counts = np.zeros((len(xq), len(zq)))
    for xi, zi in zip(x, z, strict=True):
        counts += (xq < xi)[:, None] & (zq < zi)[None, :]
    return counts / len(x)


def step_mesh(breaks: npt.ArrayLike, lo: float, hi: float, size: int) -> np.ndarray:
    """
    [lo, hi] 上的积分网格

    Args:
        breaks: 必须包含的点（样本点、查询点）
        lo: 下界
        hi: 上界
        size: 均匀点数

    Returns:
        升序去重后的网格
    """
    b = np.asarray(breaks, dtype=float).ravel()
    points = np.concatenate((np.linspace(lo, hi, size), b, np.nextafter(b, -np.inf)))
    points = points[(points >= lo) & (points <= hi)]
    return np.unique(points)


def oracle_h1_s1(
    sample: npt.ArrayLike,
    queries: npt.ArrayLike,
    mesh_size: int = 100_000,
) -> tuple[np.ndarray, np.ndarray]:
    """
    梯形积分得到 H¹ 与 S¹

    Args:
        sample: 一维样本
        queries: 查询点
        mesh_size: 均匀网格点数

    Returns:
        (H¹(q), S¹(q))
    """
    s = np.asarray(sample, dtype=float)
    q = np.asarray(queries, dtype=float)
    lo = min(s.min(), q.min())
    hi = max(s.max(), q.max())
    mesh = step_mesh(np.concatenate((s, q)), lo, hi, mesh_size)

    sorted_s = np.sort(s)
    cdf = np.searchsorted(sorted_s, mesh, side="right") / len(s)
    lower = cumulative_trapezoid(cdf, mesh, initial=0.0)

    idx = np.searchsorted(mesh, q)
    h1 = lower[idx]
    # hi 之上 1 - F = 0
    s1 = (hi - q) - (lower[-1] - lower[idx])
    return h1, s1


def oracle_h_l(
    x: npt.ArrayLike,
    z: npt.ArrayLike,
    xq: npt.ArrayLike,
    zq: npt.ArrayLike,
    origin_x: float,
    origin_z: float,
    mesh_size: int = 500,
) -> tuple[np.ndarray, np.ndarray]:
    """
    二维梯形积分得到 H 与 L

    查询点 (xq[i], zq[i]) 逐对给出，必须不低于原点

    Args:
        x: 样本变化
        z: 样本水平
        xq: 查询 x
        zq: 查询 z
        origin_x: 积分原点 x
        origin_z: 积分原点 z
        mesh_size: 每一维均匀网格点数

    Returns:
        (H(xq, zq), L(xq, zq))
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    xq = np.asarray(xq, dtype=float)
    zq = np.asarray(zq, dtype=float)

    mx = step_mesh(np.concatenate((x, xq)), origin_x, max(x.max(), xq.max()), mesh_size)
    mz = step_mesh(np.concatenate((z, zq)), origin_z, max(z.max(), zq.max()), mesh_size)

    joint = naive_joint_cdf(x, z, mx, mz)
    k = naive_cdf(x, mx)[:, None] + naive_cdf(z, mz)[None, :] - joint

    def integrate(values: np.ndarray) -> np.ndarray:
        inner = cumulative_trapezoid(values, mz, axis=1, initial=0.0)
        return cumulative_trapezoid(inner, mx, axis=0, initial=0.0)

    ix = np.searchsorted(mx, xq)
    iz = np.searchsorted(mz, zq)
    return integrate(joint)[ix, iz], integrate(k)[ix, iz]
