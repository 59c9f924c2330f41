import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from config import CONFIG_ENV_CONFIG_PATH, DEFAULT_CONFIG_FILE

logger = logging.getLogger("raapctl")


def load_env(env_file: Optional[str] = None) -> None:
    """
    Load optional environment overrides from a ``.env`` file into the current process.

    Nothing is required: when no file exists the process environment is used as is.
    Existing variables are not overridden, so an explicit ``APP_LOG_LEVEL=DEBUG raapctl ...``
    always wins over the file.

    Args:
        env_file: Path of the dotenv file. Defaults to ``.env`` in the working directory.
    """
    path = Path(env_file or ".env")
    if not path.is_file():
        return
    logger.info("Loading environment overrides from %s", path)
    load_dotenv(path, override=False)


def default_config_path() -> str:
    """Config file used when ``--config`` is not given."""
    return os.getenv(CONFIG_ENV_CONFIG_PATH, DEFAULT_CONFIG_FILE)
