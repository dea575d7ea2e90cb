"""
两样本 bootstrap 检验

步骤：
1. 计算 ĝ 与 T_n
2. 以 c_n = 4·log log n / √n 估计接触集
3. 各组独立有放回重抽样（原样本量），在同一网格与原点上计算 g*_r，
   T*_r = ‖[(g*_r - ĝ)·χ]+‖
4. p = (1/R) Σ I(T*_r + η > T_n)

第 r 次重抽样的随机流只由 (seed, 方向, r) 决定，与线程数和调度无关
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed, effective_n_jobs
from loguru import logger
from pydantic import BaseModel, ConfigDict

from domtest.criteria.functions import CoordinateField, CriteriaEvaluator
from domtest.data.grid import build_grid, pooled_support
from domtest.data.model import Criterion, Direction, EvaluationGrid, PolicySample, RunConfig
from domtest.edf.summary import EdfSummary
from domtest.inference.statistic import ContactMask, contact_set, masked_statistic, statistic
from domtest.utils.math import rejects

QUANTILES = (0.90, 0.95, 0.99)


class TestResult(BaseModel):
    """单个准则、单个方向的检验结果"""

    model_config = ConfigDict(frozen=True, extra="ignore")
    __test__ = False

    criterion: Criterion
    direction: Direction
    dominant: str  # 原假设中占优的一组
    dominated: str
    n_a: int
    n_b: int
    n: int
    t_n: float
    sqrt_n_t_n: float
    p_value: float
    reps: int
    seed: int
    c_n: float
    eta: float
    alpha: float
    reject: bool
    contact_fraction: float
    q90: float
    q95: float
    q99: float

    @property
    def hypothesis(self) -> str:
        return f"{self.dominant} ≿ {self.dominated}"


@dataclass(frozen=True, eq=False)
class _NullSide:
    """一个方向上的 ĝ、T_n 与接触集"""

    kind: Criterion
    fields: list[CoordinateField]
    t_n: float
    mask: ContactMask


def _resample(edf: EdfSummary, rng: np.random.Generator) -> EdfSummary:
    idx = rng.integers(0, edf.n, size=edf.n)
    pairs = edf.pairs[idx]
    return EdfSummary.from_arrays(pairs[:, 0], pairs[:, 1], edf.origin_x, edf.origin_z)


def _replicate_stats(
    replicates: Sequence[int],
    dominant: EdfSummary,
    dominated: EdfSummary,
    grid: EvaluationGrid,
    sides: Sequence[_NullSide],
    seed: int,
    tag: int,
) -> np.ndarray:
    """计算一批重抽样的 T*，形状 (len(replicates), len(sides))"""
    out = np.empty((len(replicates), len(sides)))
    for row, r in enumerate(replicates):
        rng = np.random.default_rng(np.random.SeedSequence([seed, tag, r]))
        # 先抽原假设中占优的一组
        star_dom = _resample(dominant, rng)
        star_sub = _resample(dominated, rng)
        evaluator = CriteriaEvaluator(star_dom, star_sub, grid)
        for col, side in enumerate(sides):
            star = {f.name: evaluator.difference(f.name) for f in side.fields}
            out[row, col] = masked_statistic(star, side.fields, side.mask)
    return out


def _bootstrap_distribution(
    dominant: EdfSummary,
    dominated: EdfSummary,
    grid: EvaluationGrid,
    sides: Sequence[_NullSide],
    reps: int,
    seed: int,
    tag: int,
    threads: int | None,
) -> np.ndarray:
    """
    所有重抽样的 T*，按 r 顺序排列

    Args:
        threads: 线程数，None 为全部核心，1 为单线程

    Returns:
        形状 (reps, len(sides)) 的数组
    """
    n_jobs = effective_n_jobs(-1 if threads is None else threads)
    if n_jobs <= 1 or reps < 2:
        return _replicate_stats(range(reps), dominant, dominated, grid, sides, seed, tag)

    chunks = [c for c in np.array_split(np.arange(reps), min(reps, 4 * n_jobs)) if len(c)]
    parts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_replicate_stats)(chunk.tolist(), dominant, dominated, grid, sides, seed, tag)
        for chunk in chunks
    )
    return np.vstack(parts)


def exceedance_pvalue(stats: np.ndarray, t_n: float, eta: float) -> float:
    """
    p = (1/R) Σ I(T*_r + η > T_n)

    T* 固定时 p 关于 T_n 单调不增
    """
    return float(np.mean(np.asarray(stats) + eta > t_n))


def _quantiles(stats: np.ndarray) -> tuple[float, float, float]:
    q = np.quantile(stats, QUANTILES)
    # 插值误差不应破坏单调性
    q = np.maximum.accumulate(q)
    return float(q[0]), float(q[1]), float(q[2])


def _test_one_direction(
    dominant: EdfSummary,
    dominated: EdfSummary,
    kinds: Sequence[Criterion],
    grid: EvaluationGrid,
    cfg: RunConfig,
    direction: Direction,
    labels: tuple[str, str],
    sizes: tuple[int, int],
    threads: int | None,
) -> list[TestResult]:
    n = sizes[0] + sizes[1]
    evaluator = CriteriaEvaluator(dominant, dominated, grid)
    sides = []
    for kind in kinds:
        fields = evaluator.fields(kind)
        mask = contact_set(fields, n, cfg.contact_scale)
        sides.append(_NullSide(kind=kind, fields=fields, t_n=statistic(fields).t, mask=mask))

    logger.info(f"bootstrap: {labels[0]} ≿ {labels[1]}, R={cfg.reps}, 准则={[k.value for k in kinds]}")
    stats = _bootstrap_distribution(
        dominant, dominated, grid, sides, cfg.reps, cfg.seed, direction.tag, threads
    )

    results = []
    for col, side in enumerate(sides):
        column = stats[:, col]
        p_value = exceedance_pvalue(column, side.t_n, cfg.eta)
        q90, q95, q99 = _quantiles(column)
        result = TestResult(
            criterion=side.kind,
            direction=direction,
            dominant=labels[0],
            dominated=labels[1],
            n_a=sizes[0] if direction is Direction.A_OVER_B else sizes[1],
            n_b=sizes[1] if direction is Direction.A_OVER_B else sizes[0],
            n=n,
            t_n=side.t_n,
            sqrt_n_t_n=math.sqrt(n) * side.t_n,
            p_value=p_value,
            reps=cfg.reps,
            seed=cfg.seed,
            c_n=side.mask.c_n,
            eta=cfg.eta,
            alpha=cfg.alpha,
            reject=rejects(p_value, cfg.alpha),
            contact_fraction=side.mask.fraction_active,
            q90=q90,
            q95=q95,
            q99=q99,
        )
        logger.info(
            f"{side.kind.label} [{result.hypothesis}] T_n={side.t_n:.4g}, p={p_value:.3f}"
            f"{' 拒绝' if result.reject else ''}"
        )
        results.append(result)
    return results


def bootstrap_pvalue(
    edf_a: EdfSummary,
    edf_b: EdfSummary,
    kind: Criterion,
    grid: EvaluationGrid,
    cfg: RunConfig,
    direction: Direction = Direction.A_OVER_B,
    threads: int | None = None,
) -> TestResult:
    """
    检验 H0: edf_a 所代表的一组占优

    Args:
        edf_a: 原假设中占优的一组
        edf_b: 另一组
        kind: 准则
        grid: 评估网格
        cfg: 运行配置
        direction: 随机流方向标签
        threads: 线程数

    Returns:
        TestResult
    """
    (result,) = _test_one_direction(
        edf_a,
        edf_b,
        [Criterion(kind)],
        grid,
        cfg,
        direction,
        ("A", "B"),
        (edf_a.n, edf_b.n),
        threads,
    )
    return result


def run_tests(
    a: PolicySample,
    b: PolicySample,
    kinds: Iterable[Criterion],
    direction: Direction,
    cfg: RunConfig,
    threads: int | None = None,
    grid: EvaluationGrid | None = None,
) -> list[TestResult]:
    """
    对一组准则做检验，同一方向的所有准则共用重抽样

    Args:
        a: 样本 A
        b: 样本 B
        kinds: 准则列表
        direction: 方向（both 展开为两个方向）
        cfg: 运行配置
        threads: 线程数，None 为全部核心
        grid: 评估网格，None 时按合并支撑与 cfg 网格大小构造

    Returns:
        按准则、再按方向排列的 TestResult 列表
    """
    kinds = [Criterion(k) for k in kinds]
    grid = grid or build_grid(pooled_support(a, b), cfg.grid_x, cfg.grid_z)
    edf_a = EdfSummary.from_sample(a, grid.box)
    edf_b = EdfSummary.from_sample(b, grid.box)

    by_direction: dict[Direction, list[TestResult]] = {}
    for d in Direction(direction).expand():
        if d is Direction.A_OVER_B:
            dominant, dominated, labels = edf_a, edf_b, (a.label, b.label)
        else:
            dominant, dominated, labels = edf_b, edf_a, (b.label, a.label)
        by_direction[d] = _test_one_direction(
            dominant, dominated, kinds, grid, cfg, d, labels, (dominant.n, dominated.n), threads
        )

    return [by_direction[d][i] for i in range(len(kinds)) for d in by_direction]


def run_test(
    a: PolicySample,
    b: PolicySample,
    kind: Criterion,
    direction: Direction,
    cfg: RunConfig,
    threads: int | None = None,
) -> list[TestResult]:
    """单个准则，一个或两个方向"""
    return run_tests(a, b, [kind], direction, cfg, threads)
