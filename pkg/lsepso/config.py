from pathlib import Path
from typing import Optional, Tuple, Type, Union

from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from lsepso.exceptions import ConfigurationError


class Settings(BaseSettings):
    # Application Settings
    LOG_LEVEL: str = "INFO"

    # Velocity law
    W: float = 0.7298
    C1: float = 1.49618
    C2: float = 1.49618
    VMAX_FRACTION: float = 0.5

    # Local search
    N_NEIGHBORS: int = 3
    # Trial points stay on the particle's half of the segment to a neighbor
    C1_LS: float = 0.5
    LS_VARIANT: str = "prose"
    LS_RANDOMIZED_N: bool = False

    # Replication
    RUNS: int = 10
    BASE_SEED: int = 0
    WORKERS: int = 1
    TRAJECTORY_STRIDE: int = 1

    # Match criteria, as fractions of the box width / catalog value span
    POSITION_EPSILON_FRACTION: float = 0.05
    FITNESS_EPSILON_FRACTION: float = 0.05

    # Catalog oracle, as divisions of the box width
    GRID_DIVISIONS: int = 500
    TOLERANCE_DIVISIONS: int = 200

    # Paths
    OUTPUT_DIR: str = "out"
    CATALOG_DIR: str = "catalogs"

    model_config = SettingsConfigDict(
        env_file=None,
        env_file_encoding="utf-8",
        extra="ignore"
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Explicit values and the config file only; the process environment
        # never changes an experiment.
        return init_settings, dotenv_settings

    @property
    def output_path(self) -> Path:
        return Path(self.OUTPUT_DIR)

    @property
    def catalog_path(self) -> Path:
        return Path(self.CATALOG_DIR)


def load_settings(config_file: Optional[Union[str, Path]] = None) -> Settings:
    """
    Build Settings from an optional key=value config file.
    """
    if config_file is None:
        return Settings()
    path = Path(config_file)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}")
    return Settings(_env_file=path)


settings = Settings()


def apply_settings(cfg: Settings) -> Settings:
    """Copy cfg into the process-wide settings read by the library modules."""
    for name in Settings.model_fields:
        setattr(settings, name, getattr(cfg, name))
    return settings
