import os
import sys
from typing import Optional

from loguru import logger

from spatialdensity.constants import LOG_FILE

LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} [{level}] {message}"


class Logger:
    """
    Run logger for the ``sds`` commands, built on the shared Loguru logger.

    Creating an instance drops every sink already installed, Loguru's default
    stderr handler included, then installs one console sink (stderr) and,
    when ``save_logs`` is set, a file sink in ``log_dir``.
    """

    _sink_ids = []

    def __init__(
        self,
        save_logs: bool = False,
        verbose: bool = False,
        log_dir: Optional[str] = None,
    ):
        """
        Args:
            save_logs (bool): If True, logs are also written to ``spatialdensity.log``
                inside ``log_dir`` (or the working directory).
            verbose (bool): Console level DEBUG when True, INFO otherwise.
            log_dir (str, optional): Directory for the log file.
        """
        self.verbose = verbose
        self.save_logs = save_logs
        self.level = "DEBUG" if verbose else "INFO"

        logger.remove()
        Logger._sink_ids = [
            logger.add(sys.stderr, level=self.level, format=LOG_FORMAT, colorize=False)
        ]
        if save_logs:
            log_path = os.path.join(log_dir or os.getcwd(), LOG_FILE)
            Logger._sink_ids.append(
                logger.add(
                    log_path,
                    level=self.level,
                    format=LOG_FORMAT,
                    rotation="10 MB",
                    encoding="utf-8",
                )
            )

    def info(self, message: str):
        logger.opt(depth=1).info(message)

    def debug(self, message: str):
        logger.opt(depth=1).debug(message)

    def close(self):
        """Removes the sinks installed by this class."""
        for sink_id in Logger._sink_ids:
            try:
                logger.remove(sink_id)
            except ValueError:
                # already removed by a later instance
                pass
        Logger._sink_ids = []
