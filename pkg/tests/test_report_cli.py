"""
报告、网格导出与命令行测试
"""

import json
from types import SimpleNamespace

import numpy as np
import pandas as pd
import pytest
from rich.console import Console

from domtest.criteria import evaluate_g
from domtest.data import Criterion, Direction, PolicySample, RunConfig, build_grid, pooled_support, write_samples
from domtest.edf import EdfSummary
from domtest.inference import run_tests
from domtest.main import EXIT_DATA, EXIT_OK, EXIT_USAGE, main, run_pipeline
from domtest.report import Report, digest_files, digest_samples, emit_distributions, emit_grids, print_report
from domtest.utils.logging import _level_filter, setup_logging

from conftest import random_sample

SMALL = ["--reps", "19", "--grid-x", "12", "--grid-z", "8", "--threads", "1"]


@pytest.fixture
def small_report(sample_pair):
    a, b = sample_pair
    cfg = RunConfig(reps=19, grid_x=12, grid_z=8, seed=5, criteria=[Criterion.LASBD, Criterion.IASD])
    return run_pipeline(a, b, cfg, digest_samples(a, b), threads=1)


@pytest.fixture
def data_csv(tmp_path, sample_pair):
    a, b = sample_pair
    return write_samples(PolicySample("JF", a.x, a.z), PolicySample("AFDC", b.x, b.z), tmp_path / "data.csv")


class TestReport:
    """JSON / Markdown 报告"""

    def test_round_trip(self, small_report, tmp_path):
        """保存再加载"""
        path = small_report.save(tmp_path / "out" / "report.json")
        loaded = Report.load(path)
        assert loaded == small_report
        assert loaded.results[0].criterion is Criterion.LASBD

    def test_unknown_fields_ignored(self, small_report):
        """新版本增加的字段不影响旧读取端"""
        data = json.loads(small_report.to_json())
        data["schema_note"] = "added later"
        data["results"][0]["extra_metric"] = 1.5
        data["arms"][0]["median_x"] = 0.0
        data["config"]["future_option"] = 1
        loaded = Report.model_validate_json(json.dumps(data))
        assert loaded == small_report
        assert not hasattr(loaded, "schema_note")

    def test_floats_round_trip_exactly(self, small_report, tmp_path):
        """浮点数按最短可往返表示写出，读回逐位一致"""
        value = 0.1 + 0.2
        first = small_report.results[0].model_copy(update={"t_n": value, "c_n": 1 / 3})
        report = small_report.model_copy(update={"results": [first]})
        text = report.to_json()
        assert repr(value) in text
        loaded = Report.load(report.save(tmp_path / "exact.json"))
        assert loaded.results[0].t_n == value
        assert loaded.results[0].c_n == 1 / 3

    def test_contents(self, small_report):
        """报告内容"""
        assert len(small_report.results) == 4
        assert [a.label for a in small_report.arms] == ["A", "B"]
        assert small_report.grid["g_x"] == 12
        assert small_report.timing is not None
        assert "timing" not in small_report.without_timing()
        r = small_report.result_for(Criterion.IASD, Direction.B_OVER_A)
        assert r is not None and r.dominant == "B"
        assert small_report.result_for(Criterion.KR_ADDITIVE, Direction.A_OVER_B) is None

    def test_markdown(self, small_report):
        """Markdown 输出"""
        md = small_report.to_markdown()
        assert md.startswith("# 占优检验报告")
        assert "## 检验结果" in md
        assert "H0: A ≿ B" in md
        for r in small_report.results:
            assert f"{r.p_value:.3f}" in md

    def test_rejected_pvalue_is_starred(self, small_report):
        """拒绝的 p 值加星号"""
        first = small_report.results[0].model_copy(update={"reject": True, "p_value": 0.0})
        report = small_report.model_copy(update={"results": [first]})
        assert "0.000*" in report.to_markdown()

    def test_table(self, small_report):
        """rich 表格"""
        console = Console(record=True, width=160)
        print_report(small_report, console)
        text = console.export_text()
        assert "占优检验结果" in text
        assert "LASBD" in text.upper()

    def test_digests(self, tmp_path, sample_pair):
        """输入摘要"""
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        p1.write_text("x,z\n1,2\n")
        p2.write_text("x,z\n1,2\n")
        assert digest_files([p1]) == digest_files([p2])
        assert digest_files([p1, p2]) != digest_files([p1])
        a, b = sample_pair
        assert digest_samples(a, b) != digest_samples(b, a)


class TestEmitGrids:
    """网格 CSV 导出"""

    def test_shapes(self, tmp_path, sample_pair):
        """各坐标文件形状"""
        a, b = sample_pair
        box = pooled_support(a, b)
        grid = build_grid(box, 100, 50)
        fields = evaluate_g(Criterion.LASBD, EdfSummary.from_sample(a, box), EdfSummary.from_sample(b, box), grid)
        paths = emit_grids(fields, tmp_path / "g")
        assert [p.name for p in paths] == ["g_F2.csv", "g_F_negx.csv", "g_F_posx.csv", "g_F1_negx.csv", "g_F1_sum.csv"]
        f2 = pd.read_csv(paths[0])
        assert list(f2.columns) == ["z", "value"]
        assert f2.shape == (50, 2)
        plane = pd.read_csv(paths[1])
        assert list(plane.columns) == ["x", "z", "value"]
        assert plane.shape == (99 * 49, 3)
        assert pd.read_csv(paths[3]).shape == (100, 2)

    def test_quadrant_columns(self, tmp_path, edf_pair):
        """象限坐标列名"""
        edf_a, edf_b, grid = edf_pair
        fields = evaluate_g(Criterion.IASD, edf_a, edf_b, grid)
        paths = emit_grids(fields, tmp_path / "q")
        quad = pd.read_csv(paths[-1])
        assert list(quad.columns) == ["x1", "x2", "value"]
        assert len(quad) == grid.g_x * grid.g_x

    def test_identical_samples_emit_zeros(self, tmp_path):
        """相同样本导出全零"""
        a = random_sample("A", 30, 41)
        b = PolicySample("B", a.x, a.z)
        box = pooled_support(a, b)
        grid = build_grid(box, 10, 6)
        fields = evaluate_g(Criterion.LIASD, EdfSummary.from_sample(a, box), EdfSummary.from_sample(b, box), grid)
        for path in emit_grids(fields, tmp_path / "z"):
            assert (pd.read_csv(path)["value"] == 0.0).all(), path.name

    def test_distributions(self, tmp_path, edf_pair):
        """分布函数导出"""
        edf_a, edf_b, grid = edf_pair
        paths = emit_distributions(edf_a, edf_b, grid, tmp_path / "d", labels=("JF", "AFDC"))
        mx, mz, joint = (pd.read_csv(p) for p in paths)
        assert list(mx.columns) == ["x", "F1_JF", "F1_AFDC"]
        assert len(mz) == grid.g_z
        assert list(joint.columns) == ["x", "z", "F_JF", "F_AFDC", "diff"]
        assert len(joint) == grid.g_x * grid.g_z
        assert np.allclose(joint["diff"], joint["F_JF"] - joint["F_AFDC"], atol=1e-15)
        # 最后一个格点覆盖全部样本
        assert mx["F1_JF"].iloc[-1] == 1.0


class TestLogging:
    """日志过滤"""

    @staticmethod
    def record(name, level_no):
        return {"name": name, "level": SimpleNamespace(no=level_no)}

    def test_inner_modules_filtered(self):
        """内层模块按级别过滤"""
        keep = _level_filter("WARNING")
        assert not keep(self.record("domtest.inference.bootstrap", 20))
        assert keep(self.record("domtest.inference.bootstrap", 30))
        assert keep(self.record("domtest.validation.montecarlo", 20))

    def test_no_inner_level(self):
        """不设内层级别时全部保留"""
        keep = _level_filter(None)
        assert keep(self.record("domtest.inference.bootstrap", 5))

    def test_setup_with_file(self, tmp_path):
        """写日志文件"""
        setup_logging("INFO", tmp_path / "logs", log_to_file=True, inner_level="WARNING")
        assert (tmp_path / "logs").is_dir()
        setup_logging("INFO")


class TestCli:
    """命令行"""

    def test_run_all_both(self, tmp_path, data_csv):
        """全部准则双方向"""
        out = tmp_path / "report.json"
        code = main(["run", "--input", str(data_csv), "--criteria", "all", "--direction", "both",
                     "--seed", "7", "--out", str(out), *SMALL])
        assert code == EXIT_OK
        report = Report.load(out)
        assert len(report.results) == 14
        assert [a.label for a in report.arms] == ["JF", "AFDC"]
        assert report.input_digest == digest_files([data_csv])
        assert report.config.seed == 7

    def test_repeat_runs_identical(self, tmp_path, data_csv):
        """线程数 1 与 8 的报告除耗时外逐字节一致"""
        outs = [tmp_path / "r1.json", tmp_path / "r8.json"]
        for out, threads in zip(outs, ["1", "8"], strict=True):
            args = ["run", "--input", str(data_csv), "--out", str(out), "--criteria", "lasbd", "iasd2", *SMALL]
            assert main([*args, "--threads", threads]) == 0
        r1, r2 = (Report.load(p) for p in outs)
        assert json.dumps(r1.without_timing(), sort_keys=True) == json.dumps(r2.without_timing(), sort_keys=True)

    def test_matches_library_call(self, tmp_path, data_csv, sample_pair):
        """与库函数结果一致"""
        out = tmp_path / "r.json"
        main(["run", "--input", str(data_csv), "--out", str(out), "--criteria", "liasd",
              "--direction", "ab", "--seed", "3", *SMALL])
        report = Report.load(out)
        a, b = sample_pair
        cfg = RunConfig(reps=19, grid_x=12, grid_z=8, seed=3, criteria=[Criterion.LIASD])
        (expected,) = run_tests(PolicySample("JF", a.x, a.z), PolicySample("AFDC", b.x, b.z),
                                [Criterion.LIASD], Direction.A_OVER_B, cfg, threads=1)
        assert report.results == [expected]

    def test_markdown_and_grids(self, tmp_path, data_csv):
        """Markdown 与网格导出"""
        out = tmp_path / "r.json"
        md = tmp_path / "r.md"
        prefix = tmp_path / "grids" / "run"
        code = main(["run", "--input", str(data_csv), "--out", str(out), "--markdown", str(md),
                     "--emit-grids", str(prefix), "--criteria", "lasbd", *SMALL])
        assert code == 0
        assert md.read_text(encoding="utf-8").startswith("# 占优检验报告")
        assert (tmp_path / "grids" / "run_lasbd_F2.csv").exists()
        assert (tmp_path / "grids" / "run_joint.csv").exists()

    def test_two_files(self, tmp_path, sample_pair):
        """两文件输入"""
        a, b = sample_pair
        pa = tmp_path / "a.csv"
        pb = tmp_path / "b.csv"
        a.to_frame().to_csv(pa, index=False)
        b.to_frame().to_csv(pb, index=False)
        out = tmp_path / "r.json"
        code = main(["run", "--input-a", str(pa), "--input-b", str(pb), "--criteria", "kr", "--out", str(out), *SMALL])
        assert code == 0
        assert len(Report.load(out).results) == 2

    def test_bad_flag(self, data_csv):
        """非法参数值退出码 2"""
        with pytest.raises(SystemExit) as exc:
            main(["run", "--input", str(data_csv), "--criteria", "nope"])
        assert exc.value.code == EXIT_USAGE

    @pytest.mark.parametrize(
        "extra",
        [["--reps", "0"], ["--eta", "0"], ["--grid-x", "1"], ["--threads", "0"], ["--alpha", "1.5"]],
    )
    def test_invalid_values(self, tmp_path, data_csv, extra):
        """越界参数退出码 2"""
        args = ["run", "--input", str(data_csv), "--out", str(tmp_path / "r.json"), *SMALL, *extra]
        assert main(args) == EXIT_USAGE

    def test_missing_inputs(self, tmp_path):
        """缺少输入退出码 2"""
        assert main(["run", "--out", str(tmp_path / "r.json")]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        """文件不存在退出码 3"""
        assert main(["run", "--input", str(tmp_path / "nope.csv"), *SMALL]) == EXIT_DATA

    def test_bad_data(self, tmp_path):
        """数据错误退出码 3"""
        path = tmp_path / "bad.csv"
        path.write_text("treatment,x,z\nA,0.1,8\nA,abc,8\nB,0,1\nB,0.5,2\n")
        assert main(["run", "--input", str(path), "--out", str(tmp_path / "r.json"), *SMALL]) == EXIT_DATA

    def test_demo(self, tmp_path):
        """demo 子命令"""
        out = tmp_path / "demo.json"
        samples = tmp_path / "demo.csv"
        code = main(["demo", "--n", "40", "--criteria", "lasbd", "--samples-out", str(samples),
                     "--out", str(out), *SMALL])
        assert code == 0
        report = Report.load(out)
        assert [arm.n for arm in report.arms] == [40, 40]
        assert samples.exists()

    def test_simulate(self, tmp_path):
        """simulate 子命令"""
        scenario = tmp_path / "tiny.yaml"
        scenario.write_text(
            "generator: null_identical\nn_a: 20\nn_b: 20\nmc_reps: 3\nreps: 9\n"
            "grid_x: 8\ngrid_z: 6\ncriteria: [lasbd]\n",
            encoding="utf-8",
        )
        out = tmp_path / "size.csv"
        code = main(["simulate", "--scenario", str(scenario), "--out", str(out), "--threads", "1"])
        assert code == 0
        rates = pd.read_csv(out)
        assert list(rates.columns) == ["criterion", "direction", "n", "rejection_rate", "mc_se"]
        assert len(rates) == 2
        assert rates["rejection_rate"].between(0, 1).all()

    def test_simulate_bad_scenario(self, tmp_path):
        """场景非法退出码 2"""
        scenario = tmp_path / "bad.yaml"
        scenario.write_text("generator: null_identical\nrho: 1.5\n", encoding="utf-8")
        assert main(["simulate", "--scenario", str(scenario), "--threads", "1"]) == EXIT_USAGE

    def test_simulate_missing_scenario(self, tmp_path):
        """场景不存在退出码 2"""
        assert main(["simulate", "--scenario", str(tmp_path / "none.yaml")]) == EXIT_USAGE
        assert main(["simulate", "--scenario", "does_not_exist"]) == EXIT_USAGE
        assert main(["demo", "--scenario", "does_not_exist"]) == EXIT_USAGE
