"""
Structured logging configuration using structlog.

Console output is rendered by structlog; JSON output hands the event dict to
python-json-logger so that every line is one flat JSON object. Everything is
written to stderr: stdout carries the solver report.
"""
import logging
import sys
from contextvars import ContextVar
from typing import Optional

import structlog
from pythonjsonlogger import jsonlogger

from app.core.config import settings

run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)
restart_var: ContextVar[Optional[int]] = ContextVar("restart", default=None)


def inject_context(logger, method_name, event_dict):
    event_dict.update(
        {
            "run_id": run_id_var.get(),
            "restart": restart_var.get(),
            "service": settings.APP_NAME,
            "version": settings.APP_VERSION,
            "environment": settings.ENVIRONMENT.value,
        }
    )
    return event_dict


def get_formatter(log_format: str) -> logging.Formatter:
    if log_format == "json":
        return jsonlogger.JsonFormatter("%(message)s")
    return logging.Formatter("%(message)s")


def get_renderer(log_format: str):
    """Last structlog processor for the chosen format."""
    if log_format == "json":
        return structlog.stdlib.render_to_log_kwargs
    return structlog.dev.ConsoleRenderer(colors=settings.is_development)


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None):
    level = (level or settings.LOG_LEVEL).upper()
    log_format = log_format or settings.LOG_FORMAT

    logging.getLogger().handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(get_formatter(log_format))
    logging.basicConfig(level=getattr(logging, level), handlers=[handler])

    structlog.configure(
        processors=[
            inject_context,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="ISO"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            get_renderer(log_format),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.getLogger("app").setLevel(getattr(logging, level))

    get_logger(__name__).debug(
        "Logging configured",
        log_level=level,
        log_format=log_format,
    )


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    return structlog.get_logger(name)
