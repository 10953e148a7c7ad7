"""
Retry utilities for report I/O using tenacity
Handles transient filesystem errors (busy files, interrupted calls, network mounts)
"""
import errno
import logging

from tenacity import (
    retry,
    stop_after_attempt,
    wait_exponential,
    retry_if_exception,
    before_sleep_log,
    after_log,
)

logger = logging.getLogger(__name__)

TRANSIENT_ERRNOS = {errno.EAGAIN, errno.EBUSY, errno.EINTR, errno.ETIMEDOUT, errno.EIO}


def should_retry_io_error(exception):
    """
    Determine if an OSError should be retried

    Retry on:
    - EAGAIN, EBUSY, EINTR, ETIMEDOUT, EIO

    Don't retry on:
    - missing directories, permissions, paths that are directories
    """
    if isinstance(exception, (FileNotFoundError, PermissionError, IsADirectoryError, NotADirectoryError)):
        return False
    if isinstance(exception, OSError):
        return exception.errno in TRANSIENT_ERRNOS
    return False


def retry_io(max_attempts=3, initial_wait=0.1, max_wait=2, multiplier=2):
    """
    Decorator for retrying file writes with exponential backoff

    Args:
        max_attempts: Maximum number of attempts (default: 3)
        initial_wait: Initial wait time in seconds (default: 0.1)
        max_wait: Maximum wait time in seconds (default: 2)
        multiplier: Exponential multiplier (default: 2)

    Usage:
        @retry_io(max_attempts=3)
        def write_report(path, text):
            ...
    """
    return retry(
        stop=stop_after_attempt(max_attempts),
        wait=wait_exponential(multiplier=multiplier, min=initial_wait, max=max_wait),
        retry=retry_if_exception(should_retry_io_error),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        after=after_log(logger, logging.ERROR),
        reraise=True,
    )
