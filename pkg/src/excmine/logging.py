import sys

from loguru import logger

from excmine.config import EXCMINE_LOG_LEVEL


LEVEL_EMOJIS = {
    "TRACE": "🔍",
    "DEBUG": "🐛",
    "INFO": "🚀",
    "SUCCESS": "✅",
    "WARNING": "⚠️",
    "ERROR": "❌",
    "CRITICAL": "🚨",
}

LOG_FORMAT = (
    "<level>{extra[level_emoji]: <10}</level> | "
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


def emoji_filter(record):
    level = record["level"].name
    record["extra"]["level_emoji"] = f"{LEVEL_EMOJIS.get(level, '')} {level}"
    return True


def configure(level: str = EXCMINE_LOG_LEVEL) -> int:
    """Send log records at `level` and above to stderr. Outputs written to stdout stay clean."""
    logger.remove()
    return logger.add(sys.stderr, format=LOG_FORMAT, filter=emoji_filter, level=level.upper())


configure()

custom_logger = logger
