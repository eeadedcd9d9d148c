"""
Module that provides the process configuration for the Levy Bridge library
"""

from functools import lru_cache
from typing import Annotated, Tuple, Type

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Config(BaseSettings):
    """Environment Config"""

    LEVY_BRIDGE_THREADS: Annotated[int, Field(ge=1, le=256)] = 4
    LEVY_BRIDGE_LOG_LEVEL: str = "INFO"
    LEVY_BRIDGE_OUTPUT_DIR: str = "out"

    model_config = SettingsConfigDict(case_sensitive=True, env_file_encoding="utf-8")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (
            env_settings,
            dotenv_settings,
        )


@lru_cache
def get_config(filename: str = ".env"):
    """Gets Config"""
    return Config(_env_file=filename)
