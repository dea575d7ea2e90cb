"""
domtest 命令行入口

三个子命令：
1. run: 读取两组样本，运行占优检验，输出 JSON 报告
2. simulate: 按场景文件做 Monte Carlo 水平/功效模拟
3. demo: 用 figure1_replica 模拟数据走完整流程（不需要输入文件）

退出码: 0 成功（与检验结论无关）, 2 参数/配置错误, 3 数据/文件错误
"""

from __future__ import annotations

import argparse
import sys
import time
from collections.abc import Sequence
from datetime import datetime
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from domtest import __version__
from domtest.criteria import evaluate_many
from domtest.data import (
    Criterion,
    Direction,
    PolicySample,
    RunConfig,
    build_grid,
    load_samples,
    pooled_support,
    write_samples,
)
from domtest.edf import EdfSummary, describe_sample
from domtest.errors import ConfigError, DataError
from domtest.inference import run_tests
from domtest.report import (
    ArmSummary,
    Report,
    build_report,
    digest_files,
    digest_samples,
    emit_distributions,
    emit_grids,
)
from domtest.settings import Settings, init_settings
from domtest.utils.logging import setup_logging
from domtest.validation import GeneratorKind, ScenarioSpec, generate, mc_power, mc_size, write_results

console = Console()

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

DIRECTION_FLAGS = {"ab": Direction.A_OVER_B, "ba": Direction.B_OVER_A, "both": Direction.BOTH}


def _parse_criteria(values: Sequence[str] | None) -> list[Criterion] | None:
    if not values:
        return None
    if "all" in values:
        return list(Criterion)
    return list(dict.fromkeys(Criterion(v) for v in values))


def _run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """params.yaml 的 run 段 + 命令行覆盖"""
    params = settings.load_params_config().get("run", {})
    return RunConfig.from_params(
        params,
        criteria=_parse_criteria(args.criteria),
        direction=DIRECTION_FLAGS[args.direction] if args.direction else None,
        reps=args.reps,
        grid_x=args.grid_x,
        grid_z=args.grid_z,
        seed=args.seed,
        eta=args.eta,
        alpha=args.alpha,
    )


def _threads(args: argparse.Namespace, settings: Settings) -> int | None:
    threads = args.threads if args.threads is not None else settings.threads
    if threads is not None and threads < 1:
        raise ConfigError(f"--threads 必须为正整数: {threads}")
    return threads


def run_pipeline(
    a: PolicySample,
    b: PolicySample,
    cfg: RunConfig,
    input_digest: str,
    threads: int | None = None,
    emit_prefix: str | None = None,
) -> Report:
    """
    完整检验流程：网格 → 检验 → 报告（可选导出网格）

    Args:
        a: 样本 A
        b: 样本 B
        cfg: 运行配置
        input_digest: 输入摘要
        threads: bootstrap 线程数
        emit_prefix: 网格 CSV 前缀，None 不导出

    Returns:
        Report
    """
    started = datetime.now()
    t0 = time.perf_counter()

    grid = build_grid(pooled_support(a, b), cfg.grid_x, cfg.grid_z)
    edf_a = EdfSummary.from_sample(a, grid.box)
    edf_b = EdfSummary.from_sample(b, grid.box)

    results = run_tests(a, b, cfg.criteria, cfg.direction, cfg, threads=threads, grid=grid)

    if emit_prefix:
        for kind, fields in evaluate_many(cfg.criteria, edf_a, edf_b, grid).items():
            emit_grids(fields, f"{emit_prefix}_{kind.value}")
        emit_distributions(edf_a, edf_b, grid, emit_prefix, labels=(a.label, b.label))

    arms = [
        ArmSummary(label=s.label, **describe_sample(e))
        for s, e in ((a, edf_a), (b, edf_b))
    ]
    return build_report(
        input_digest=input_digest,
        config=cfg,
        results=results,
        arms=arms,
        grid=grid.to_dict(),
        started_at=started,
        elapsed_seconds=time.perf_counter() - t0,
    )


def _finish(report: Report, args: argparse.Namespace) -> None:
    report.save(args.out)
    if args.markdown:
        path = Path(args.markdown)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_markdown() + "\n", encoding="utf-8")
        logger.info(f"Markdown 报告已保存: {path}")
    console.print(report.to_table())
    console.print(f"\n[green]报告已生成:[/green] {args.out}")


def cmd_run(args: argparse.Namespace, settings: Settings) -> None:
    """run 子命令"""
    if args.input and (args.input_a or args.input_b):
        raise ConfigError("--input 与 --input-a/--input-b 不能同时使用")
    if args.input:
        paths: list[str] = [args.input]
        source: str | list[str] = args.input
    elif args.input_a and args.input_b:
        paths = [args.input_a, args.input_b]
        source = paths
    else:
        raise ConfigError("需要 --input，或同时给出 --input-a 与 --input-b")

    cfg = _run_config(args, settings)
    threads = _threads(args, settings)
    a, b = load_samples(source, schema=args.schema, label_a=args.label_a)
    report = run_pipeline(a, b, cfg, digest_files(paths), threads, args.emit_grids)
    _finish(report, args)


def cmd_demo(args: argparse.Namespace, settings: Settings) -> None:
    """demo 子命令：模拟数据上的完整流程"""
    spec = ScenarioSpec.from_dict(settings.load_scenario_config(args.scenario))
    cfg = _run_config(args, settings)
    threads = _threads(args, settings)

    a, b = generate(spec, cfg.seed, n_a=args.n, n_b=args.n)
    if args.samples_out:
        write_samples(a, b, args.samples_out)
    console.print(f"[cyan]模拟数据 ({spec.generator.value}): {a.label} n={a.n}, {b.label} n={b.n}[/cyan]")
    report = run_pipeline(a, b, cfg, digest_samples(a, b), threads, args.emit_grids)
    _finish(report, args)


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> None:
    """simulate 子命令"""
    data: dict[str, Any] = dict(settings.load_scenario_config(args.scenario))
    if args.mc_reps is not None:
        data["mc_reps"] = args.mc_reps
    if args.reps is not None:
        data["reps"] = args.reps
    if args.alpha is not None:
        data["alpha"] = args.alpha
    data.setdefault("name", Path(args.scenario).stem)
    spec = ScenarioSpec.from_dict(data)
    threads = _threads(args, settings)

    if spec.generator is GeneratorKind.NULL_IDENTICAL and not args.ladder:
        rates = mc_size(spec, args.seed, threads=threads)
    else:
        rates = mc_power(spec, args.seed, ladder=args.ladder, threads=threads)

    out = args.out or f"{spec.name}_results.csv"
    write_results(rates, out)

    table = Table(title=f"🎲 {spec.name} ({spec.generator.value})")
    for col in ("准则", "方向", "n", "拒绝率", "MC 标准误"):
        table.add_column(col, justify="right" if col not in ("准则", "方向") else "left")
    for row in rates.itertuples(index=False):
        table.add_row(row.criterion, row.direction, str(row.n), f"{row.rejection_rate:.3f}", f"{row.mc_se:.3f}")
    console.print(table)
    console.print(f"\n[green]结果已保存:[/green] {out}")


def _add_test_options(p: argparse.ArgumentParser) -> None:
    """run / demo 共用的检验参数（未给出时取 config/params.yaml）"""
    p.add_argument(
        "--criteria",
        nargs="+",
        choices=[c.value for c in Criterion] + ["all"],
        help="检验准则，可多选；all 为全部七个 (默认: 六个主准则)",
    )
    p.add_argument("--direction", choices=list(DIRECTION_FLAGS), help="原假设方向 (默认: both)")
    p.add_argument("--reps", type=int, help="bootstrap 重复次数 (默认: 999)")
    p.add_argument("--grid-x", type=int, help="变化维网格点数 (默认: 100)")
    p.add_argument("--grid-z", type=int, help="水平维网格点数 (默认: 50)")
    p.add_argument("--seed", type=int, help="随机种子 (默认: 0)")
    p.add_argument("--eta", type=float, help="p 值并列打破常数 (默认: 1e-6)")
    p.add_argument("--alpha", type=float, help="名义水平 (默认: 0.05)")
    p.add_argument("--out", default="report.json", help="JSON 报告路径 (默认: report.json)")
    p.add_argument("--markdown", help="额外写出 Markdown 汇总表")
    p.add_argument("--emit-grids", metavar="PREFIX", help="导出各坐标函数网格 CSV")
    p.add_argument("--threads", type=int, help="bootstrap 线程数 (默认: 全部核心)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="domtest",
        description="domtest: 损失厌恶/不平等厌恶敏感的二元随机占优检验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  domtest run --input data.csv --criteria all --direction both --seed 7 --out report.json
  domtest run --input-a jf.csv --input-b afdc.csv --schema prepost
  domtest simulate --scenario size --mc-reps 200
  domtest demo --reps 199
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--debug", action="store_true", help="调试模式")

    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="对输入数据运行检验")
    p_run.add_argument("--input", help="含 treatment 列的 CSV")
    p_run.add_argument("--input-a", help="A 组单独的 CSV")
    p_run.add_argument("--input-b", help="B 组单独的 CSV")
    p_run.add_argument("--schema", choices=["xz", "prepost"], help="列格式 (默认: 按列名推断)")
    p_run.add_argument("--label-a", help="作为 A 组的处理组标签 (默认: 首个出现的标签)")
    _add_test_options(p_run)

    p_sim = sub.add_parser("simulate", help="Monte Carlo 水平/功效模拟")
    p_sim.add_argument("--scenario", default="size", help="场景名 (config/scenarios 下) 或 YAML 路径")
    p_sim.add_argument("--seed", type=int, default=0, help="基础种子 (默认: 0)")
    p_sim.add_argument("--mc-reps", type=int, help="覆盖 Monte Carlo 重复次数")
    p_sim.add_argument("--reps", type=int, help="覆盖内层 bootstrap 重复次数")
    p_sim.add_argument("--alpha", type=float, help="覆盖名义水平")
    p_sim.add_argument("--ladder", type=int, nargs="+", help="每组样本量序列（功效模拟）")
    p_sim.add_argument("--out", help="结果 CSV 路径 (默认: {场景名}_results.csv)")
    p_sim.add_argument("--threads", type=int, help="外层线程数 (默认: 全部核心)")

    p_demo = sub.add_parser("demo", help="模拟数据演示（不需要输入文件）")
    p_demo.add_argument("--scenario", default="figure1", help="场景名或 YAML 路径 (默认: figure1)")
    p_demo.add_argument("--n", type=int, help="每组样本量 (默认: 场景设定)")
    p_demo.add_argument("--samples-out", help="把模拟样本写成 CSV")
    _add_test_options(p_demo)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # 初始化配置
    try:
        settings = init_settings(debug=args.debug)
    except ValidationError as e:
        logger.error(f"环境配置错误: {e.errors()[0]['loc']} {e.errors()[0]['msg']}")
        return EXIT_USAGE
    log_level = "DEBUG" if args.debug else settings.log_level
    # 模拟时每次重复都跑一遍 bootstrap，内层日志只保留警告
    inner_level = "WARNING" if args.command == "simulate" and not args.debug else None
    setup_logging(
        log_level=log_level,
        log_dir=settings.abs_log_dir,
        log_to_file=settings.log_to_file,
        inner_level=inner_level,
    )

    commands = {"run": cmd_run, "simulate": cmd_simulate, "demo": cmd_demo}
    try:
        commands[args.command](args, settings)
    except ConfigError as e:
        logger.error(f"参数错误: {e}")
        return EXIT_USAGE
    except (DataError, OSError) as e:
        logger.error(f"数据错误: {e}")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
