"""Logging configuration shared by the CLI and long runs."""
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'


def configure_logging(log_dir, level='INFO', debug=False, filename='fog.log'):
    """Attach logging handlers tailored to the profile."""
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.INFO))
    root = logging.getLogger()
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))

    if debug:
        return root

    logs_dir = Path(log_dir)
    logs_dir.mkdir(parents=True, exist_ok=True)

    log_path = logs_dir / filename
    file_handler = RotatingFileHandler(log_path, maxBytes=10 * 1024 * 1024, backupCount=5)
    formatter = logging.Formatter(LOG_FORMAT)
    file_handler.setFormatter(formatter)
    file_handler.setLevel(logging.INFO)

    if not any(isinstance(handler, RotatingFileHandler) for handler in root.handlers):
        root.addHandler(file_handler)
    return root
