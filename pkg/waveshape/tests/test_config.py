import importlib.util
import logging
import os
from unittest.mock import patch

from ..utils import config


def test_thread_count_explicit():
    assert config.thread_count("3") == 3


@patch("os.cpu_count", return_value=6)
def test_thread_count_zero_means_per_cpu(mock_cpu):
    assert config.thread_count("0") == 6
    assert config.thread_count("") == 6
    assert config.thread_count("-2") == 6


@patch("os.cpu_count", return_value=None)
def test_thread_count_without_cpu_info(mock_cpu):
    assert config.thread_count("0") == 1


@patch("os.cpu_count", return_value=2)
def test_thread_count_invalid_value(mock_cpu, caplog):
    with caplog.at_level(logging.WARNING, logger="waveshape.utils.config"):
        assert config.thread_count("many") == 2
    assert "WAVESHAPE_THREADS" in caplog.text


def test_playsport_path():
    assert config.PLAYSPORT_CSV.endswith("playsport.csv")


def test_configure_logging_uses_stderr(capsys):
    config.configure_logging("INFO")
    logging.getLogger("waveshape.test").info("hello")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "INFO waveshape.test: hello" in captured.err


def _setup_script():
    spec = importlib.util.spec_from_file_location("waveshape_setup", os.path.join(config.BASE_DIR, "setup.py"))
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_setup_reports_missing_runtime_modules():
    script = _setup_script()
    with patch.object(script.importlib.util, "find_spec", side_effect=lambda name: None if name == "streamlit" else object()):
        assert script.missing_modules() == ["streamlit"]


def test_setup_installs_from_requirements_once():
    script = _setup_script()
    with patch.object(script.subprocess, "check_call") as mock_call:
        script.install_dependencies()
    mock_call.assert_called_once()
    assert mock_call.call_args.args[0][-2:] == ["-r", "requirements.txt"]
