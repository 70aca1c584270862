"""Structured logging tests."""

import json

import pytest

from petalknot.petalknot_logging import StructuredLogger, configure_logging, operation


def test_structured_record(capsys):
    """Records are JSON objects carrying their context."""
    logger = StructuredLogger("petalknot.test", level="INFO").with_context(p=5)
    logger.info("Classified", classes=4)
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["message"] == "Classified"
    assert record["level"] == "INFO"
    assert record["p"] == 5
    assert record["classes"] == 4


def test_level_filters(capsys):
    logger = StructuredLogger("petalknot.quiet", level="WARNING")
    logger.info("hidden")
    assert capsys.readouterr().err == ""


def test_operation_logs_failure(capsys):
    logger = StructuredLogger("petalknot.op", level="INFO")
    with pytest.raises(RuntimeError):
        with operation("census", logger) as op:
            op.add_context(p=7)
            raise RuntimeError("boom")
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["level"] == "ERROR"
    assert record["operation"] == "census"
    assert record["error"] == "boom"


def test_unknown_level():
    with pytest.raises(ValueError, match="Unknown log level"):
        configure_logging("LOUD")
