"""
Monte Carlo 检验水平与功效

外层重复用线程并行，内层 bootstrap 单线程，避免嵌套并行。
第 m 次重复的数据与 bootstrap 种子只由 (seed, m) 决定，
不同样本量共用同一组种子
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from joblib import Parallel, delayed, effective_n_jobs
from loguru import logger

from domtest.errors import ConfigError
from domtest.inference.bootstrap import run_tests
from domtest.utils.math import is_nondecreasing, mc_standard_error, rejects
from domtest.validation.scenarios import GeneratorKind, ScenarioSpec, generate

RESULT_COLUMNS = ["criterion", "direction", "n", "rejection_rate", "mc_se"]


def _replication_seed(seed: int, m: int) -> int:
    state = np.random.SeedSequence([seed, m]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _one_replication(spec: ScenarioSpec, seed: int, m: int, n_a: int, n_b: int) -> list[dict[str, object]]:
    a, b = generate(spec, [seed, m], n_a=n_a, n_b=n_b)
    cfg = spec.run_config(_replication_seed(seed, m))
    results = run_tests(a, b, spec.criteria, spec.direction, cfg, threads=1)
    return [
        {
            "replication": m,
            "criterion": r.criterion.value,
            "direction": r.direction.value,
            "n": n_a,
            "p_value": r.p_value,
        }
        for r in results
    ]


def mc_pvalues(
    spec: ScenarioSpec,
    seed: int,
    n_a: int | None = None,
    n_b: int | None = None,
    threads: int | None = None,
) -> pd.DataFrame:
    """
    逐次重复的 p 值

    Args:
        spec: 场景
        seed: 基础种子
        n_a: A 组样本量（默认 spec.n_a）
        n_b: B 组样本量（默认 spec.n_b）
        threads: 外层线程数，None 为全部核心

    Returns:
        DataFrame (replication, criterion, direction, n, p_value)
    """
    n_a = n_a or spec.n_a
    n_b = n_b or spec.n_b
    n_jobs = effective_n_jobs(-1 if threads is None else threads)
    logger.info(f"Monte Carlo: {spec.name}, n={n_a}/{n_b}, 重复 {spec.mc_reps} 次, R={spec.reps}")

    if n_jobs <= 1:
        rows = [_one_replication(spec, seed, m, n_a, n_b) for m in range(spec.mc_reps)]
    else:
        rows = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_one_replication)(spec, seed, m, n_a, n_b) for m in range(spec.mc_reps)
        )
    return pd.DataFrame([row for part in rows for row in part])


def rejection_rates(pvalues: pd.DataFrame, alpha: float) -> pd.DataFrame:
    """
    p 值表汇总为拒绝率

    Args:
        pvalues: mc_pvalues 的输出
        alpha: 名义水平（0 时永不拒绝）

    Returns:
        DataFrame (criterion, direction, n, rejection_rate, mc_se)
    """
    records = []
    for (criterion, direction, n), group in pvalues.groupby(
        ["criterion", "direction", "n"], sort=False
    ):
        reps = len(group)
        rate = sum(rejects(p, alpha) for p in group["p_value"]) / reps
        records.append({
            "criterion": criterion,
            "direction": direction,
            "n": int(n),
            "rejection_rate": rate,
            "mc_se": mc_standard_error(rate, reps),
        })
    return pd.DataFrame(records, columns=RESULT_COLUMNS)


def mc_size(spec: ScenarioSpec, seed: int, threads: int | None = None) -> pd.DataFrame:
    """
    原假设下（两组同分布）的拒绝率

    Args:
        spec: generator 必须为 null_identical
        seed: 基础种子
        threads: 外层线程数

    Returns:
        拒绝率表
    """
    if spec.generator is not GeneratorKind.NULL_IDENTICAL:
        raise ConfigError(f"检验水平模拟需要 null_identical 场景，实际: {spec.generator.value}")
    rates = rejection_rates(mc_pvalues(spec, seed, threads=threads), spec.alpha)
    logger.info(f"检验水平: 最大拒绝率 {rates['rejection_rate'].max():.3f} (α={spec.alpha})")
    return rates


def mc_power(
    spec: ScenarioSpec,
    seed: int,
    ladder: Sequence[int] | None = None,
    threads: int | None = None,
) -> pd.DataFrame:
    """
    备择假设下的拒绝率，按每组样本量递增

    Args:
        spec: 场景
        seed: 基础种子（各样本量共用）
        ladder: 每组样本量序列，默认 spec.ladder，为空时用 spec.n_a
        threads: 外层线程数

    Returns:
        拒绝率表，每个样本量一段
    """
    sizes = list(ladder or spec.ladder or [spec.n_a])
    frames = [
        rejection_rates(mc_pvalues(spec, seed, n_a=n, n_b=n, threads=threads), spec.alpha)
        for n in sizes
    ]
    rates = pd.concat(frames, ignore_index=True)

    for (criterion, direction), group in rates.groupby(["criterion", "direction"], sort=False):
        if not is_nondecreasing(group.sort_values("n")["rejection_rate"].tolist()):
            logger.warning(f"{criterion} [{direction}] 拒绝率未随样本量单调增加")
    return rates


def write_results(rates: pd.DataFrame, path: str | Path) -> Path:
    """写出拒绝率 CSV"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rates[RESULT_COLUMNS].to_csv(path, index=False)
    logger.info(f"模拟结果已保存: {path}")
    return path
