"""
样本加载模块

从 CSV 读取两组处理样本，支持两种列格式：
- xz: treatment, x, z（已是对数变化与对数水平）
- prepost: treatment, pre_income, post_income（由 derive_changes 转换）
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from enum import Enum
from pathlib import Path

import pandas as pd
from loguru import logger

from domtest.data.model import Observation, PolicySample
from domtest.errors import DataError

TREATMENT_COLUMN = "treatment"


class Schema(str, Enum):
    """输入列格式"""

    XZ = "xz"
    PREPOST = "prepost"

    @property
    def value_columns(self) -> tuple[str, str]:
        if self is Schema.XZ:
            return ("x", "z")
        return ("pre_income", "post_income")


def derive_changes(pre: float, post: float, row: int | None = None) -> Observation:
    """
    由前后收入计算 (变化, 水平)

    x = log(post) - log(pre), z = log(post)，自然对数

    Args:
        pre: 实验前收入
        post: 实验后收入
        row: 所在行（用于报错）

    Returns:
        Observation
    """
    if not (pre > 0 and post > 0):
        raise DataError(f"收入必须为正: pre_income={pre}, post_income={post}", row=row)
    log_post = math.log(post)
    return Observation(x=log_post - math.log(pre), z=log_post)


def _read_csv(path: Path) -> pd.DataFrame:
    """读取 CSV（全部按字符串读入，数值解析自行处理）"""
    if not path.exists():
        raise DataError(f"文件不存在: {path}")
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"无法解析 CSV {path}: {e}") from e
    df.columns = [str(c).strip() for c in df.columns]
    return df


def _detect_schema(df: pd.DataFrame, path: Path) -> Schema:
    """根据列名推断格式"""
    for schema in (Schema.XZ, Schema.PREPOST):
        if all(c in df.columns for c in schema.value_columns):
            return schema
    raise DataError(
        f"{path}: 无法识别列格式，需要 (x, z) 或 (pre_income, post_income) 列，实际: {list(df.columns)}"
    )


def _parse_float(cell: str, column: str, row: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"列 {column} 含非数值单元格: {cell!r}", row=row) from None
    if not math.isfinite(value):
        raise DataError(f"列 {column} 含 NaN/无穷值: {cell!r}", row=row)
    return value


def _frame_to_observations(df: pd.DataFrame, schema: Schema) -> list[Observation]:
    """逐行解析数值列"""
    first, second = schema.value_columns
    missing = [c for c in (first, second) if c not in df.columns]
    if missing:
        raise DataError(f"缺少列 {missing}（格式 {schema.value}）")

    observations: list[Observation] = []
    for row, (a_cell, b_cell) in enumerate(zip(df[first], df[second], strict=True)):
        a = _parse_float(a_cell, first, row)
        b = _parse_float(b_cell, second, row)
        if schema is Schema.PREPOST:
            observations.append(derive_changes(a, b, row=row))
        else:
            observations.append(Observation(x=a, z=b))
    return observations


def _split_by_treatment(
    df: pd.DataFrame,
    observations: list[Observation],
    label_a: str | None,
) -> tuple[PolicySample, PolicySample]:
    labels = [str(v) for v in df[TREATMENT_COLUMN]]
    distinct = list(dict.fromkeys(labels))
    if len(distinct) != 2:
        raise DataError(f"需要恰好两个处理组 (treatment)，实际 {len(distinct)} 个: {distinct}")

    if label_a is not None:
        if label_a not in distinct:
            raise DataError(f"--label-a {label_a!r} 不在处理组 {distinct} 中")
        distinct.sort(key=lambda lab: lab != label_a)

    samples = []
    for lab in distinct:
        obs = [o for o, l_ in zip(observations, labels, strict=True) if l_ == lab]
        if len(obs) < 2:
            raise DataError(f"处理组 {lab} 只有 {len(obs)} 个观测，至少需要 2 个")
        samples.append(PolicySample.from_observations(lab, obs))
    return samples[0], samples[1]


def _load_single_arm(path: Path, schema: Schema | None) -> PolicySample:
    """读取只含一个处理组的文件（--input-a / --input-b）"""
    df = _read_csv(path)
    schema = schema or _detect_schema(df, path)
    label = path.stem
    if TREATMENT_COLUMN in df.columns:
        distinct = list(dict.fromkeys(str(v) for v in df[TREATMENT_COLUMN]))
        if len(distinct) != 1:
            raise DataError(f"{path}: 单组文件应只含一个处理组，实际: {distinct}")
        label = distinct[0]
    observations = _frame_to_observations(df, schema)
    if len(observations) < 2:
        raise DataError(f"{path}: 至少需要 2 个观测，实际 {len(observations)}")
    return PolicySample.from_observations(label, observations)


def load_samples(
    path_or_paths: str | Path | Sequence[str | Path],
    schema: Schema | str | None = None,
    label_a: str | None = None,
) -> tuple[PolicySample, PolicySample]:
    """
    加载两组样本

    Args:
        path_or_paths: 单个文件（含 treatment 列），或两个单组文件 (A, B)
        schema: 列格式，None 时按列名推断
        label_a: 指定作为 A 的处理组名（默认首个出现的标签）

    Returns:
        (样本 A, 样本 B)，组内行序与文件一致
    """
    schema = Schema(schema) if schema is not None else None

    if isinstance(path_or_paths, (str, Path)):
        path = Path(path_or_paths)
        df = _read_csv(path)
        if TREATMENT_COLUMN not in df.columns:
            raise DataError(f"{path}: 缺少 {TREATMENT_COLUMN} 列")
        used = schema or _detect_schema(df, path)
        observations = _frame_to_observations(df, used)
        a, b = _split_by_treatment(df, observations, label_a)
    else:
        paths = [Path(p) for p in path_or_paths]
        if len(paths) != 2:
            raise DataError(f"需要恰好两个输入文件，实际 {len(paths)} 个")
        a, b = (_load_single_arm(p, schema) for p in paths)
        if a.label == b.label:
            raise DataError(f"两个输入文件的处理组标签相同: {a.label}")
        if label_a is not None and label_a not in (a.label, b.label):
            raise DataError(f"--label-a {label_a!r} 不在处理组 {[a.label, b.label]} 中")
        if label_a == b.label:
            a, b = b, a

    logger.info(f"加载样本: {a.label} n={a.n}, {b.label} n={b.n}")
    return a, b


def write_samples(a: PolicySample, b: PolicySample, path: str | Path) -> Path:
    """
    将两组样本写回 CSV (treatment, x, z)

    浮点数按最短可往返表示写出，重新加载后数值逐位一致
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.concat([a.to_frame(), b.to_frame()], ignore_index=True)
    df["x"] = df["x"].map(lambda v: repr(float(v)))
    df["z"] = df["z"].map(lambda v: repr(float(v)))
    df.to_csv(path, index=False, encoding="utf-8")
    logger.debug(f"样本已写出: {path}")
    return path
