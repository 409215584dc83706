#!/usr/bin/env python3
"""
LDNN 积分方程求解器命令行入口

子命令:
    run        训练 LDNN 并输出报告
    baseline   训练普通前馈网络对照
    compare    把已保存的 CSV 报告与发表数值对照
    verify     运行性质校验套件
    reference  打印内置的发表数值
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from interface import (
    compare_to_reference,
    emit_report,
    format_comparison,
    format_reference,
    format_summary,
    report_from_csv,
    run_experiment,
    run_fnn_baseline,
    run_verification,
)
from network import ConfigurationError, NetworkConfig, load_parameters, save_parameters
from problem import EXPERIMENT_IDS, ProblemDefinitionError, load_problem
from solver_logging import LogLevel, LogManager
from training import TrainConfig, TrainingDivergenceError

WORKERS_ENV = "LDNN_WORKERS"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DIVERGENCE = 2
EXIT_VERIFY_FAILED = 3

# 自定义问题文件的实验编号
CUSTOM_EXPERIMENT = 0


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要逗号分隔的整数: {text}")


def _weights(text: str) -> Tuple[float, float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要两个逗号分隔的实数: {text}")
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"需要两个逗号分隔的实数: {text}")
    return values[0], values[1]


def _bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"需要 true 或 false: {text}")


def _experiment(text: str):
    if text == "all":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"实验编号应为 1-4 或 all: {text}")
    if value not in EXPERIMENT_IDS:
        raise argparse.ArgumentTypeError(f"实验编号应为 1-4 或 all: {text}")
    return value


def _add_logging_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub.add_argument("--log-dir", default="logs")


def _add_training_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--experiment", type=_experiment, default=1, help="1-4 或 all")
    sub.add_argument("--problem-file", help="自定义问题定义文件，替代 --experiment")
    sub.add_argument("--layers", type=_int_list, help="例如 1,10,30,20,10,1")
    sub.add_argument("--degrees", type=_int_list, help="第一隐层各神经元的 Legendre 次数")
    sub.add_argument("--n1", type=int)
    sub.add_argument("--n2", type=int)
    sub.add_argument("--m1", type=int)
    sub.add_argument("--m2", type=int)
    sub.add_argument("--adam-iters", type=int)
    sub.add_argument("--adam-lr", type=float)
    sub.add_argument("--lbfgs-iters", type=int)
    sub.add_argument("--lbfgs-tol", type=float)
    sub.add_argument("--lbfgs-memory", type=int)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--supervised", type=_bool)
    sub.add_argument("--loss-weights", type=_weights)
    sub.add_argument("--sampling", choices=["equispaced", "random"])
    sub.add_argument("--workers", type=int, help=f"残差计算线程数，默认读取 {WORKERS_ENV}")
    sub.add_argument("--jobs", type=int, default=1, help="--experiment all 时并行的实验数")
    sub.add_argument("--out", help="报告输出路径；同时写出 *_history.csv")
    sub.add_argument("--format", choices=["table", "csv"], default="table")
    sub.add_argument("--timing", action="store_true", help="报告中附加 wall_time_s（附加后输出不再逐次一致）")
    sub.add_argument("--checkpoint", help="训练结束后保存参数")
    sub.add_argument("--resume", help="从参数文件继续训练")
    _add_logging_flags(sub)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldnn",
        description="用 Legendre 深度网络求解非线性 Volterra-Fredholm-Hammerstein 积分方程",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    _add_training_flags(subparsers.add_parser("run", help="训练 LDNN"))
    _add_training_flags(subparsers.add_parser("baseline", help="训练 FNN 对照网络"))

    compare = subparsers.add_parser("compare", help="与发表数值对照")
    compare.add_argument("--report", required=True, help="run --format csv 生成的报告")
    compare.add_argument("--experiment", type=int, required=True, choices=list(EXPERIMENT_IDS))
    _add_logging_flags(compare)

    verify = subparsers.add_parser("verify", help="运行性质校验套件")
    _add_logging_flags(verify)

    reference = subparsers.add_parser("reference", help="打印发表数值")
    reference.add_argument("--experiment", type=int, choices=list(EXPERIMENT_IDS))
    return parser


def resolve_workers(flag: Optional[int]) -> int:
    """--workers 优先，其次环境变量，默认 1"""
    if flag is not None:
        return flag
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"环境变量 {WORKERS_ENV} 不是整数: {raw!r}")


def build_configs(args, experiment_id: int) -> Tuple[TrainConfig, NetworkConfig]:
    """基准汇总表的默认配置，命令行参数逐项覆盖"""
    base_id = experiment_id if experiment_id in EXPERIMENT_IDS else 3
    overrides = {"seed": args.seed, "workers": resolve_workers(args.workers)}
    for flag, field in (("n1", "n1"), ("n2", "n2"), ("m1", "m1"), ("m2", "m2"),
                        ("adam_iters", "adam_iters"), ("adam_lr", "adam_lr"),
                        ("lbfgs_iters", "lbfgs_max_iters"), ("lbfgs_tol", "lbfgs_tol"),
                        ("lbfgs_memory", "lbfgs_memory"), ("supervised", "supervised"),
                        ("loss_weights", "loss_weights"), ("sampling", "sampling")):
        value = getattr(args, flag)
        if value is not None:
            overrides[field] = value
    train_config = TrainConfig.table1(base_id, **overrides).validate()

    net_config = NetworkConfig.table1(seed=args.seed)
    if args.layers:
        net_config = NetworkConfig(args.layers, args.degrees, seed=args.seed)
    elif args.degrees:
        net_config = NetworkConfig(net_config.layer_sizes, args.degrees, seed=args.seed)
    return train_config, net_config.validate()


def _suffixed(path: Optional[str], experiment_id: int, multiple: bool, suffix: str = "") -> Optional[str]:
    if not path:
        return None
    stem, ext = os.path.splitext(path)
    if multiple:
        stem = f"{stem}_exp{experiment_id}"
    return f"{stem}{suffix}{ext or ('.csv' if suffix else '')}"


def _make_log_manager(args, run_name: str) -> LogManager:
    log_manager = LogManager(run_name, args.log_dir)
    log_manager.set_log_level(LogLevel.from_name(args.log_level))
    return log_manager


def _run_one(args, experiment_id: int, baseline: bool, multiple: bool) -> dict:
    """单个实验：训练、写文件，返回结果字典（输出文本由调用方统一打印）"""
    method = "baseline" if baseline else "run"
    log_manager = _make_log_manager(args, f"{method}-exp{experiment_id}")
    try:
        train_config, net_config = build_configs(args, experiment_id)
        problem = load_problem(args.problem_file) if args.problem_file else None

        initial = None
        if args.resume:
            saved_config, initial = load_parameters(args.resume)
            if saved_config.layer_sizes != net_config.layer_sizes:
                raise ConfigurationError(
                    f"参数文件结构 {saved_config.layer_sizes} 与 {net_config.layer_sizes} 不一致"
                )
            log_manager.log_checkpoint(args.resume, saved=False)

        runner = run_fnn_baseline if baseline else run_experiment
        report = runner(experiment_id, train_config, net_config, log_manager, problem, initial)

        checkpoint = _suffixed(args.checkpoint, experiment_id, multiple)
        if checkpoint:
            save_parameters(checkpoint, net_config, report.params)
            log_manager.log_checkpoint(checkpoint)

        text = emit_report(report, args.format, include_timing=args.timing)
        out = _suffixed(args.out, experiment_id, multiple)
        if out:
            with open(out, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            report.state.write_history_csv(_suffixed(args.out, experiment_id, multiple, "_history"))
        return {"success": True, "message": f"实验{experiment_id}完成",
                "output": text + format_summary(report)}
    except TrainingDivergenceError as e:
        log_manager.log_error("CLI", "训练发散", str(e))
        return {"success": False, "message": f"实验{experiment_id}训练发散: {e}", "divergence": True}
    except (ConfigurationError, ProblemDefinitionError, ValueError, OSError) as e:
        log_manager.log_error("CLI", str(e))
        return {"success": False, "message": str(e)}
    finally:
        log_manager.close()


def command_run(args, baseline: bool = False) -> dict:
    if args.problem_file:
        if args.experiment == "all":
            return {"success": False, "message": "--problem-file 不能与 --experiment all 同时使用"}
        ids = [CUSTOM_EXPERIMENT]
    else:
        ids = list(EXPERIMENT_IDS) if args.experiment == "all" else [args.experiment]
    multiple = len(ids) > 1

    if multiple and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_one, args, i, baseline, multiple) for i in ids]
            results = [f.result() for f in futures]
    else:
        results = [_run_one(args, i, baseline, multiple) for i in ids]

    for result in results:
        if result.get("output"):
            print(result["output"])
    failed = [r for r in results if not r["success"]]
    if not failed:
        return {"success": True, "message": f"{len(results)} 个实验完成"}
    return {
        "success": False,
        "message": "；".join(r["message"] for r in failed),
        "divergence": any(r.get("divergence") for r in failed),
    }


def command_compare(args) -> dict:
    try:
        with open(args.report, "r", encoding="utf-8") as f:
            report = report_from_csv(f.read(), args.experiment)
        summary = compare_to_reference(report, experiment_id=args.experiment)
    except (OSError, ValueError) as e:
        return {"success": False, "message": str(e)}
    print(format_comparison(summary))
    return {"success": True, "message": "对照完成", "passed": summary.all_passed}


def command_verify(args) -> dict:
    log_manager = _make_log_manager(args, "verify")
    try:
        result = run_verification(log_manager)
    finally:
        log_manager.close()
    for check in result["checks"]:
        mark = "✅" if check.passed else "❌"
        print(f"{mark} {check.name}: {check.detail}")
    return result


def command_reference(args) -> dict:
    ids = [args.experiment] if args.experiment else list(EXPERIMENT_IDS)
    for experiment_id in ids:
        print(format_reference(experiment_id))
    return {"success": True, "message": "ok"}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            result = command_run(args)
        elif args.command == "baseline":
            result = command_run(args, baseline=True)
        elif args.command == "compare":
            result = command_compare(args)
        elif args.command == "verify":
            result = command_verify(args)
            print(result["message"])
            return EXIT_OK if result["success"] else EXIT_VERIFY_FAILED
        else:
            result = command_reference(args)
    except ConfigurationError as e:
        result = {"success": False, "message": str(e)}

    if result["success"]:
        return EXIT_OK
    print(f"❌ {result['message']}", file=sys.stderr)
    return EXIT_DIVERGENCE if result.get("divergence") else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
