"""
/tests/test_logging.py

日志器与日志管理器测试
"""
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import re

import pytest

from solver_logging import LogLevel, LogManager, SolverLogger

LINE_PATTERN = re.compile(r"^\[\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}\] \[(\w+)\] \[(\w+)\] (.*)$")


def _lines(path):
    return path.read_text(encoding="utf-8").splitlines()


def test_level_names():
    assert LogLevel.from_name("debug") is LogLevel.DEBUG
    assert LogLevel.from_name("WARNING") is LogLevel.WARNING
    with pytest.raises(ValueError):
        LogLevel.from_name("verbose")


def test_logger_writes_formatted_lines(tmp_path):
    logger = SolverLogger("unit", str(tmp_path))
    logger.info("hello", "TEST")
    logger.close()
    lines = _lines(tmp_path / "unit.log")
    assert len(lines) == 3
    level, component, message = LINE_PATTERN.match(lines[1]).groups()
    assert (level, component, message) == ("INFO", "TEST", "hello")


def test_level_filter(tmp_path):
    logger = SolverLogger("filtered", str(tmp_path))
    logger.set_log_level(LogLevel.WARNING)
    logger.debug("hidden")
    logger.info("hidden")
    logger.warning("shown")
    logger.error("shown")
    text = (tmp_path / "filtered.log").read_text(encoding="utf-8")
    assert "hidden" not in text
    assert text.count("shown") == 2


def test_close_line_summarises_run(tmp_path):
    logger = SolverLogger("summary", str(tmp_path))
    logger.set_log_level(LogLevel.WARNING)
    logger.info("dropped")
    logger.warning("slow")
    logger.error("bad", "LBFGS")
    logger.critical("worse")
    assert logger.counts[LogLevel.WARNING] == 1
    assert logger.counts[LogLevel.INFO] == 0
    logger.close()
    lines = _lines(tmp_path / "summary.log")
    assert "pid" in LINE_PATTERN.match(lines[0]).group(3)
    level, component, message = LINE_PATTERN.match(lines[-1]).groups()
    assert (level, component) == ("INFO", "SYSTEM")
    assert message.startswith("运行 summary 结束: 耗时 ")
    assert message.endswith("警告 1 条, 错误 2 条")


def test_unwritable_log_reports_once(tmp_path, capsys):
    logger = SolverLogger("broken", str(tmp_path))
    logger.log_file = str(tmp_path / "missing" / "broken.log")
    logger.info("first")
    logger.info("second")
    assert capsys.readouterr().out.count("写入日志") == 1


def test_manager_helpers(tmp_path):
    manager = LogManager("manager", str(tmp_path))
    manager.set_log_level(LogLevel.DEBUG)
    manager.log_experiment_start(2, {"m1": 500, "n1": 50})
    manager.log_adam_progress(100, 1e-3, 2e-3, 3e-3)
    manager.log_lbfgs_iteration(7, 1.5e-9, 2e-6)
    manager.log_line_search_fallback(8, recovered=True)
    manager.log_line_search_fallback(9, recovered=False)
    manager.log_phase("L-BFGS", "memory=10")
    manager.log_checkpoint("params.csv")
    manager.log_error("CLI", "出错", "细节")
    manager.log_experiment_end(2, 7.1e-9, 7.5e-9, 3.25)
    manager.close()

    parsed = [LINE_PATTERN.match(line).groups() for line in _lines(tmp_path / "manager.log")]
    components = [component for _, component, _ in parsed]
    assert components.count("BENCH") == 2
    assert ("WARNING", "LBFGS") in [(lvl, comp) for lvl, comp, _ in parsed]
    assert ("ERROR", "LBFGS") in [(lvl, comp) for lvl, comp, _ in parsed]
    messages = [message for _, _, message in parsed]
    assert "实验2开始: m1=500, n1=50" in messages
    assert "出错 - 细节" in messages
    assert any("L2_test=7.500000e-09" in m for m in messages)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
