"""Exit-code discipline for command handlers"""
import logging
from functools import wraps

from .errors import ConfigError, FogError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def exit_codes(f):
    """Map a command handler's outcome onto the CLI exit codes.

    The handler returns True/None on success and False when a verification
    or acceptance check failed.

    Usage:
        @exit_codes
        def cmd_verify_theorems(args):
            ...
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            outcome = f(*args, **kwargs)
        except ConfigError as exc:
            print(f"❌ Config error: {exc}")
            logger.error('Config error in %s: %s', f.__name__, exc)
            return EXIT_USAGE
        except FogError:
            logger.exception('%s failed', f.__name__)
            return EXIT_FAILED

        if outcome is False:
            return EXIT_FAILED
        return EXIT_OK
    return decorated_function
