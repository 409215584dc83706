"""
/tests/test_main.py

命令行入口测试：参数解析、环境变量、各子命令与退出码
"""
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

import main
from network import load_parameters

TINY_RUN = ["--layers", "1,3,3,1", "--m1", "8", "--m2", "5", "--n1", "6", "--n2", "6",
            "--adam-iters", "2", "--lbfgs-iters", "2"]


def test_parser_defaults_and_overrides():
    args = main.build_parser().parse_args(["run", "--experiment", "2", "--loss-weights", "1,0.5",
                                           "--supervised", "false", "--layers", "1,5,1"])
    assert args.experiment == 2
    assert args.loss_weights == (1.0, 0.5)
    assert args.supervised is False
    assert args.layers == [1, 5, 1]
    assert main.build_parser().parse_args(["run", "--experiment", "all"]).experiment == "all"


@pytest.mark.parametrize("argv", [
    ["run", "--experiment", "5"],
    ["run", "--loss-weights", "1"],
    ["run", "--supervised", "maybe"],
    ["compare", "--experiment", "1"],
])
def test_parser_rejects_bad_flags(argv):
    with pytest.raises(SystemExit):
        main.build_parser().parse_args(argv)


def test_build_configs_uses_summary_defaults(monkeypatch):
    monkeypatch.delenv(main.WORKERS_ENV, raising=False)
    args = main.build_parser().parse_args(["run", "--experiment", "1", "--m1", "40"])
    train_config, net_config = main.build_configs(args, 1)
    assert train_config.m1 == 40
    assert train_config.n2 is None
    assert train_config.workers == 1
    assert net_config.layer_sizes == [1, 10, 30, 20, 10, 1]


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv(main.WORKERS_ENV, "3")
    assert main.resolve_workers(None) == 3
    assert main.resolve_workers(2) == 2
    monkeypatch.setenv(main.WORKERS_ENV, "many")
    with pytest.raises(main.ConfigurationError):
        main.resolve_workers(None)


def test_reference_command(capsys):
    assert main.main(["reference", "--experiment", "1"]) == main.EXIT_OK
    assert "4.015095e-09" in capsys.readouterr().out


def test_repeated_runs_write_identical_reports(tmp_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        argv = ["run", "--experiment", "1", *TINY_RUN, "--format", "csv", "--out", str(out),
                "--log-dir", str(tmp_path / "logs")]
        assert main.main(argv) == main.EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert b"wall_time_s" not in outputs[0]


def test_timing_flag_appends_wall_time(tmp_path):
    out = tmp_path / "timed.csv"
    argv = ["run", "--experiment", "1", *TINY_RUN, "--format", "csv", "--timing", "--out", str(out),
            "--log-dir", str(tmp_path / "logs")]
    assert main.main(argv) == main.EXIT_OK
    assert out.read_text(encoding="utf-8").splitlines()[-1].startswith("wall_time_s,")


def test_run_writes_report_history_and_checkpoint(tmp_path, capsys):
    out = tmp_path / "report.csv"
    checkpoint = tmp_path / "params.csv"
    argv = ["run", "--experiment", "3", *TINY_RUN, "--format", "csv", "--out", str(out),
            "--checkpoint", str(checkpoint), "--log-dir", str(tmp_path / "logs")]
    assert main.main(argv) == main.EXIT_OK
    assert out.read_text(encoding="utf-8").startswith("x,y_exact,y_pred,abs_error")
    assert (tmp_path / "report_history.csv").exists()
    config, _ = load_parameters(str(checkpoint))
    assert config.layer_sizes == [1, 3, 3, 1]
    assert (tmp_path / "logs" / "run-exp3.log").exists()

    # 从检查点继续训练
    resumed = ["run", "--experiment", "3", *TINY_RUN, "--resume", str(checkpoint),
               "--log-dir", str(tmp_path / "logs")]
    assert main.main(resumed) == main.EXIT_OK

    # 检查点与网络结构不一致
    mismatched = ["run", "--experiment", "3", "--layers", "1,4,1", "--resume", str(checkpoint),
                  "--adam-iters", "0", "--lbfgs-iters", "0", "--log-dir", str(tmp_path / "logs")]
    assert main.main(mismatched) == main.EXIT_FAILURE
    capsys.readouterr()


def test_compare_command(tmp_path, capsys):
    report = tmp_path / "exp1.csv"
    argv = ["run", "--experiment", "1", *TINY_RUN, "--format", "csv", "--out", str(report),
            "--log-dir", str(tmp_path / "logs")]
    assert main.main(argv) == main.EXIT_OK
    capsys.readouterr()
    assert main.main(["compare", "--report", str(report), "--experiment", "1",
                      "--log-dir", str(tmp_path / "logs")]) == main.EXIT_OK
    assert "L2_test" in capsys.readouterr().out
    missing = tmp_path / "missing.csv"
    assert main.main(["compare", "--report", str(missing), "--experiment", "1"]) == main.EXIT_FAILURE


def test_problem_file_run(tmp_path, capsys):
    problem = tmp_path / "custom.problem"
    problem.write_text("xi1 = 1; xi2 = 0; g = quartic_poly; k1 = half_inverse_x;\n"
                       "phi1 = square; exact = x2_plus_half;\n", encoding="utf-8")
    argv = ["run", "--problem-file", str(problem), *TINY_RUN, "--log-dir", str(tmp_path / "logs")]
    assert main.main(argv) == main.EXIT_OK
    assert "实验0" in capsys.readouterr().out

    broken = tmp_path / "broken.problem"
    broken.write_text("xi1 = 1; xi2 = 0; g = quartic_pol;\n", encoding="utf-8")
    argv = ["run", "--problem-file", str(broken), *TINY_RUN, "--log-dir", str(tmp_path / "logs")]
    assert main.main(argv) == main.EXIT_FAILURE
    assert "quartic_poly" in capsys.readouterr().err


def test_invalid_configuration_exit_code(tmp_path, capsys):
    argv = ["run", "--experiment", "1", "--m1", "0", "--log-dir", str(tmp_path)]
    assert main.main(argv) == main.EXIT_FAILURE
    assert "m1" in capsys.readouterr().err


def test_divergence_exit_code(tmp_path, capsys):
    checkpoint = tmp_path / "huge.csv"
    values = ["# layer_sizes=1,2,1"] + ["1e120"] * 7
    checkpoint.write_text("\n".join(values) + "\n", encoding="utf-8")
    argv = ["run", "--experiment", "1", "--layers", "1,2,1", "--m1", "6", "--m2", "3",
            "--n1", "4", "--adam-iters", "2", "--lbfgs-iters", "0", "--resume", str(checkpoint),
            "--log-dir", str(tmp_path / "logs")]
    assert main.main(argv) == main.EXIT_DIVERGENCE
    assert "发散" in capsys.readouterr().err


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
