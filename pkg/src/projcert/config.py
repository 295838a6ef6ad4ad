"""Runtime configuration: reads env vars and exposes a singleton.

Loads the default seed, sample count, sampling scale, tolerances and log
level from PROJCERT_* environment variables (with .env support).
.env loading priority: local .env (cwd) > $PROJCERT_DIR/.env (default
~/.projcert). The directory is only read, never created.

Key class: Config (singleton instantiated as `config`, imported lazily by
main so that configuration errors surface as exit code 64).
"""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

from .sampling import SampleConfig
from .utils import projcert_dir

logger = logging.getLogger(__name__)

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_int(name: str, default: int, *, minimum: int | None = None) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw.strip())
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw.strip())
    except ValueError as e:
        raise ValueError(f"{name} must be a number, got {raw!r}") from e


class Config:
    """Defaults for every run, loaded from environment variables."""

    def __init__(self) -> None:
        self.config_dir = projcert_dir()

        # Load .env: local (cwd) takes priority over config_dir
        # load_dotenv default override=False means first-loaded wins
        local_env = Path(".env")
        global_env = self.config_dir / ".env"
        if local_env.is_file():
            load_dotenv(local_env)
            logger.debug("Loaded env from %s", local_env.resolve())
        if global_env.is_file():
            load_dotenv(global_env)
            logger.debug("Loaded env from %s", global_env)

        defaults = SampleConfig()
        self.seed = _env_int("PROJCERT_SEED", defaults.seed)
        self.samples = _env_int("PROJCERT_SAMPLES", defaults.n_samples, minimum=1)
        self.scale = _env_float("PROJCERT_SCALE", defaults.scale)
        self.atol = _env_float("PROJCERT_ATOL", defaults.atol)
        self.rtol = _env_float("PROJCERT_RTOL", defaults.rtol)
        self.fd_step = _env_float("PROJCERT_FD_STEP", defaults.fd_step)
        self.grid_resolution = _env_float("PROJCERT_GRID_RESOLUTION", defaults.grid_resolution)

        self.log_level = (os.getenv("PROJCERT_LOG_LEVEL") or "").strip().upper() or "INFO"
        if self.log_level not in _LOG_LEVELS:
            raise ValueError(
                f"PROJCERT_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}, "
                f"got {self.log_level!r}"
            )

        # Range checks live in SampleConfig; report them against the env vars
        try:
            self.sample_config()
        except ValueError as e:
            raise ValueError(f"Invalid PROJCERT_* setting: {e}") from e

        logger.debug(
            "Config initialized: dir=%s, seed=%d, samples=%d, scale=%g, atol=%g, rtol=%g",
            self.config_dir,
            self.seed,
            self.samples,
            self.scale,
            self.atol,
            self.rtol,
        )

    def sample_config(self) -> SampleConfig:
        """SampleConfig built from the configured defaults."""
        return SampleConfig(
            seed=self.seed,
            n_samples=self.samples,
            scale=self.scale,
            atol=self.atol,
            rtol=self.rtol,
            fd_step=self.fd_step,
            grid_resolution=self.grid_resolution,
        )


config = Config()
